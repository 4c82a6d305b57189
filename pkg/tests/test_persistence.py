import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barcat import linalg
from barcat.barc_category import cokernel, compose_overlap, kernel, triviality_threshold
from barcat.barcode import Barcode, reindexes
from barcat.generate import random_module, random_mono, random_morphism
from barcat.interleave import bottleneck_distance, is_delta_matching, to_delta_matching
from barcat.intervals import INF, bounds_above, bounds_below, is_delta_trivial, shift, threshold_le
from barcat.persistence import (
    InadmissibleEntry,
    ModuleMorphism,
    PersistenceModule,
    build_interleaving_from_matching,
    check_module_interleaving,
    cokernel_family,
    cokernel_module,
    compose_morphisms,
    format_morphism,
    from_interval_matrix,
    identity_morphism,
    image_family,
    image_module,
    induced_matching,
    internal_matrix,
    kernel_family,
    kernel_module,
    module_interleaving_failure,
    parse_morphism,
    rank_function,
    shift_module,
    zero_morphism,
)

PM = PersistenceModule.from_intervals
seeds = st.integers(0, 10**9)


def worked_example():
    M = PM(["[2,4)"], prefix="m")
    N = PM(["[0,4)", "[1,3)"], prefix="n")
    return from_interval_matrix(M, N, [("n0", "m0", 1), ("n1", "m0", 1)], 2)


def test_worked_example():
    f = worked_example()
    assert reindexes(cokernel_module(f).bars, Barcode.from_intervals(["[0,3)", "[1,2)"]))
    assert len(kernel_module(f).bars) == 0
    assert reindexes(image_module(f).bars, Barcode.from_intervals(["[2,4)"]))
    X = induced_matching(f)
    assert X.sorted_pairs() == [("m0", "n0")]
    Q = cokernel(X)[0]
    assert reindexes(Q, Barcode.from_intervals(["[0,2)", "[1,3)"]))
    assert not all(is_delta_trivial(iv, 2) for iv in cokernel_module(f).bars.intervals)
    assert all(is_delta_trivial(iv, 2) for iv in Q.intervals)
    assert triviality_threshold(cokernel_module(f).bars) == (3, True)
    assert triviality_threshold(Q) == (2, True)


def test_inadmissible_entry_message():
    M = PM(["[0,3)"], prefix="m")
    N = PM(["[1,2)"], prefix="n")
    with pytest.raises(InadmissibleEntry, match=r"entry \(n0, m0\).*does not bound"):
        from_interval_matrix(M, N, [("n0", "m0", 1)])
    # a zero scalar is always allowed
    from_interval_matrix(M, N, [("n0", "m0", 0)])


def test_non_commuting_square_rejected():
    M = PM(["[0,2)"])
    N = PM(["[0,2)"])
    grid = (Fraction(0), Fraction(1), Fraction(2))
    with pytest.raises(ValueError, match="commute"):
        ModuleMorphism(M, N, grid, ([[1]], [[0]], np.zeros((0, 0), dtype=object)), 2)


def test_non_prime_field_rejected():
    M = PM(["[0,2)"])
    with pytest.raises(ValueError):
        identity_morphism(M, p=4)


def test_identity_and_zero():
    M = PM(["[0,2)", "[1,inf)", "[1,3)"])
    idm = identity_morphism(M)
    assert len(kernel_module(idm).bars) == 0 and len(cokernel_module(idm).bars) == 0
    assert induced_matching(idm).pairs == {(k, k) for k in M.bars.indices}
    z = zero_morphism(M, M)
    assert reindexes(kernel_module(z).bars, M.bars)
    assert induced_matching(z).pairs == frozenset()


def _direct_ranks(f, which):
    """Rank of ``V_s -> V_t`` on the grid via block-matrix ranks only."""
    p, g = f.p, f.grid
    out = {}
    for i, s in enumerate(g):
        for t in g[i:]:
            A, B = f.at(s), f.at(t)
            Ms, Ns = internal_matrix(f.source, s, t), internal_matrix(f.target, s, t)
            if which == "image":
                r = linalg.rank(linalg.matmul(Ns, A, p), p)
            elif which == "kernel":
                r = linalg.rank(np.vstack([A, Ms]), p) - linalg.rank(A, p)
            else:
                r = linalg.rank(np.hstack([Ns, B]), p) - linalg.rank(B, p)
            out[(s, t)] = r
    return out


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([2, 3, 5]))
def test_rank_functions_match_direct_formulas(seed, p):
    rng = random.Random(seed)
    M, N = random_module(rng, 5, prefix="m"), random_module(rng, 5, prefix="n")
    f = random_morphism(rng, M, N, p)
    for which, fam in (("image", image_family(f)), ("kernel", kernel_family(f)), ("cokernel", cokernel_family(f))):
        r = rank_function(fam)
        direct = _direct_ranks(f, which)
        for i, s in enumerate(fam.grid):
            for j in range(i, len(fam.grid)):
                assert r[i][j] == direct[(s, fam.grid[j])], (which, s, fam.grid[j])


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_dimension_count(seed):
    rng = random.Random(seed)
    M, N = random_module(rng, 6, prefix="m"), random_module(rng, 6, prefix="n")
    f = random_morphism(rng, M, N)
    K, I, Q = kernel_module(f), image_module(f), cokernel_module(f)
    for t in f.grid:
        dk, di, dq = (len(X.alive(t)) for X in (K, I, Q))
        assert dk + di == len(M.alive(t))
        assert di + dq == len(N.alive(t))


def _check_induced_matching_bounds(f):
    X = induced_matching(f)
    kf, qf = triviality_threshold(kernel_module(f).bars), triviality_threshold(cokernel_module(f).bars)
    kx, qx = triviality_threshold(kernel(X)[0]), triviality_threshold(cokernel(X)[0])
    assert threshold_le(kx, kf) and threshold_le(qx, qf)
    if kf[0] != INF:
        d = kf[0]
        for k, I in f.source.bars:
            if not is_delta_trivial(I, d):
                assert X(k) is not None
        for a, b in X.pairs:
            assert bounds_above(f.target.bars[b], shift(f.source.bars[a], d))
    if qf[0] != INF:
        d = qf[0]
        for k, J in f.target.bars:
            if not is_delta_trivial(J, d):
                assert X.preimage(k) is not None
        for a, b in X.pairs:
            assert bounds_below(shift(f.source.bars[a], d), f.target.bars[b])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_induced_matching_bounds(seed):
    rng = random.Random(seed)
    M, N = random_module(rng, 6, prefix="m"), random_module(rng, 6, prefix="n")
    _check_induced_matching_bounds(random_morphism(rng, M, N))


def test_induced_matching_bounds_worked_example():
    _check_induced_matching_bounds(worked_example())


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_monos_compose(seed):
    rng = random.Random(seed)
    L = random_module(rng, 4, prefix="l", p_inf=0.1)
    f = random_mono(rng, L, prefix="m")
    g = random_mono(rng, f.target, prefix="n")
    assert len(kernel_module(f).bars) == 0 and len(kernel_module(g).bars) == 0
    Xf, Xg = induced_matching(f), induced_matching(g)
    Xgf = induced_matching(compose_morphisms(g, f))
    assert Counter(compose_overlap(Xg, Xf).interval_pairs()) == Counter(Xgf.interval_pairs())
    # monos go to matchings that cover the source
    assert {a for a, _ in Xf.pairs} == set(L.bars.indices)


def test_module_interleaving_from_matching():
    M = PM(["[0,4)", "[1,2)"], prefix="m")
    N = PM(["[1,5)"], prefix="n")
    res = bottleneck_distance(M.bars, N.bars)
    assert (res.value, res.attained) == (1, True)
    f, g = build_interleaving_from_matching(M, N, res.witness, res.value)
    assert check_module_interleaving(M, N, res.value, f, g)
    # at half a unit [0,4) cannot map to [1/2,9/2), so f must vanish and g f cannot be the 1-shift
    f2 = zero_morphism(M, shift_module(N, Fraction(1, 2)))
    g2 = from_interval_matrix(N, shift_module(M, Fraction(1, 2)), [("m0", "n0", 1)])
    assert module_interleaving_failure(M, N, Fraction(1, 2), f2, g2) is not None


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_interleaving_round_trip(seed):
    rng = random.Random(seed)
    M, N = random_module(rng, 4, prefix="m"), random_module(rng, 4, prefix="n")
    res = bottleneck_distance(M.bars, N.bars)
    if not res.attained:
        return
    d = res.value
    f, g = build_interleaving_from_matching(M, N, res.witness, d)
    assert check_module_interleaving(M, N, d, f, g)
    assert is_delta_matching(to_delta_matching(induced_matching(f), d), d)
    assert is_delta_matching(to_delta_matching(induced_matching(g), d), d)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_morphism_text_round_trip(seed):
    from barcat.intervals import overlaps_above

    rng = random.Random(seed)
    M, N = random_module(rng, 4, prefix="m"), random_module(rng, 4, prefix="n")
    entries = [
        (i, j, rng.randrange(3)) for i, J in N.bars for j, I in M.bars if overlaps_above(I, J)
    ]
    f = from_interval_matrix(M, N, entries, 3)
    M2, N2, e2, p = parse_morphism(format_morphism(M, N, entries, 3))
    assert (M2, N2, p) == (M, N, 3)
    g = from_interval_matrix(M2, N2, e2, p)
    assert all(np.array_equal(f.at(t), g.at(t)) for t in f.grid)
