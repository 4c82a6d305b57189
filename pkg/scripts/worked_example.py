"""Cokernel of f = (1 1): C^[2,4) -> C^[0,4) + C^[1,3) versus the cokernel of its induced matching."""

from barcat.barc_category import cokernel, triviality_threshold
from barcat.persistence import PersistenceModule, cokernel_module, from_interval_matrix, induced_matching


def main():
    M = PersistenceModule.from_intervals(["[2,4)"], prefix="m")
    N = PersistenceModule.from_intervals(["[0,4)", "[1,3)"], prefix="n")
    f = from_interval_matrix(M, N, [("n0", "m0", 1), ("n1", "m0", 1)], p=2)
    X = induced_matching(f)
    rows = [("coker f", cokernel_module(f).bars), ("coker X_f", cokernel(X)[0])]
    print(f"X_f = {X}")
    for name, C in rows:
        value, attained = triviality_threshold(C)
        print(f"{name:10s} {str(C.sorted()):20s} trivial for delta {'>=' if attained else '>'} {value}")


if __name__ == "__main__":
    main()
