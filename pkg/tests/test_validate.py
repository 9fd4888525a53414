import random
from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symvenn.core import ClusterForm, as_order, build_sigma, canonical_parts, k_point_table, mirror_alpha
from symvenn.maps import anchored_isomorphic
from symvenn.validate import (
    InvalidDiagramError,
    Reason,
    check_crosscut_symmetry,
    check_polar_symmetry,
    curve_crossing_lists,
    find_crosscuts,
    flip_sequence,
    full_sequence,
    canonical_start,
    polar_trace_witness,
    rotation_canonical,
    same_diagram,
    shift_permutation,
    to_cluster_form,
    validate_full,
    validate_symmetric,
)

from conftest import HAMILTON_ALPHA, M4_ALPHA, NEWROZ_ALPHA, VALID_N7, known_valid_forms

CENSUS = {3: (6, 2), 5: (30, 6), 7: (126, 18), 11: (2046, 186)}


@pytest.mark.parametrize("form", known_valid_forms(), ids=lambda f: f"n{f.n}-{len(f.alpha)}")
def test_known_diagrams_valid(form):
    full = validate_full(form)
    sym = validate_symmetric(form)
    assert full.valid and sym.valid
    assert (full.census_size, sym.census_size) == CENSUS[form.n]
    assert sorted(sym.shift_cycle) == list(range(form.n))


def test_n7_arrangements():
    accepted = set()
    for alpha in set(permutations((2, 3, 3, 4))):
        verdicts = {validate_full(ClusterForm(7, alpha)).valid, validate_symmetric(ClusterForm(7, alpha)).valid}
        assert len(verdicts) == 1
        if verdicts.pop():
            accepted.add(alpha)
    assert accepted == VALID_N7


def test_reason_codes():
    assert validate_full((1, 2, 3), 7).reason is Reason.LENGTH_MISMATCH
    bad = list(build_sigma(ClusterForm(7, M4_ALPHA)))
    bad[3] = 7
    for check in (validate_full, validate_symmetric):
        rep = check(bad, 7)
        assert rep.reason is Reason.VALUE_OUT_OF_RANGE and rep.failing_position == 3
    rep = validate_full(ClusterForm(7, (4, 3, 2, 3)))
    assert rep.reason is Reason.DUPLICATE_REGION and not rep
    assert validate_symmetric(ClusterForm(7, (4, 3, 2, 3))).reason is Reason.DUPLICATE_ORBIT
    # a swap sequence whose cluster step fixes the ray order
    assert validate_symmetric((1, 1) * 9, 7).reason is Reason.SHIFT_NOT_FULL_CYCLE


def _fuzz_cases(rng, count):
    bases = {n: [f.sigma for f in known_valid_forms() if f.n == n] for n in (5, 7)}
    for i in range(count):
        n = 5 if i % 3 == 0 else 7
        kind = i % 4
        if kind == 0:
            yield n, tuple(rng.randint(1, n - 1) for _ in range(len(bases[n][0])))
        elif kind == 1 and n == 7:
            yield n, build_sigma(ClusterForm(7, tuple(rng.randint(1, 5) for _ in range(4))))
        else:
            seq = list(rng.choice(bases[n]))
            for _ in range(rng.randint(0, 2)):
                j = rng.randrange(len(seq) - 1)
                if rng.random() < 0.5:
                    seq[j], seq[j + 1] = seq[j + 1], seq[j]
                else:
                    seq[j] = rng.randint(1, n - 1)
            yield n, tuple(seq)


def test_oracle_agreement_fuzz():
    rng = random.Random(20240611)
    tally = Counter()
    for n, seq in _fuzz_cases(rng, 10_000):
        a, b = validate_full(seq, n).valid, validate_symmetric(seq, n).valid
        assert a == b, (n, seq)
        tally[a] += 1
    # both outcomes must be well represented
    assert tally[True] > 500 and tally[False] > 500


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([5, 7]), st.data())
def test_oracle_agreement_property(n, data):
    length = 6 if n == 5 else 18
    seq = data.draw(st.lists(st.integers(1, n - 1), min_size=length, max_size=length))
    assert validate_full(seq, n).valid == validate_symmetric(seq, n).valid


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([f for f in known_valid_forms() if 5 <= f.n <= 7]), st.data())
def test_commuting_swaps_preserve_verdict(form, data):
    seq = list(form.sigma)
    for _ in range(data.draw(st.integers(1, 6))):
        spots = [i for i in range(len(seq) - 1) if abs(seq[i] - seq[i + 1]) > 1]
        i = data.draw(st.sampled_from(spots))
        seq[i], seq[i + 1] = seq[i + 1], seq[i]
    assert validate_full(seq, form.n).valid and validate_symmetric(seq, form.n).valid


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=18, max_size=18), st.data())
def test_commuting_swap_invariance_random(seq, data):
    spots = [i for i in range(len(seq) - 1) if abs(seq[i] - seq[i + 1]) > 1]
    if not spots:
        return
    i = data.draw(st.sampled_from(spots))
    seq2 = seq[:i] + [seq[i + 1], seq[i]] + seq[i + 2 :]
    assert validate_full(seq, 7).valid == validate_full(seq2, 7).valid
    assert validate_symmetric(seq, 7).valid == validate_symmetric(seq2, 7).valid


@given(st.integers(3, 13).filter(lambda n: n % 2), st.data())
def test_rotation_canonical_is_orbit_minimum(n, data):
    mask = data.draw(st.integers(1, (1 << n) - 2))
    full = (1 << n) - 1
    orbit = {((mask << s) | (mask >> (n - s))) & full for s in range(n)}
    assert rotation_canonical(mask, n) == min(orbit)


def test_rotation_canonical_rejects_trivial_sets():
    with pytest.raises(ValueError):
        rotation_canonical(0, 5)
    with pytest.raises(ValueError):
        rotation_canonical(31, 5)


@pytest.mark.parametrize("n, count", [(3, 6), (5, 5), (7, 7), (11, 11)])
def test_crosscut_counts(n, count):
    form = next(f for f in known_valid_forms() if f.n == n)
    cuts = find_crosscuts(form)
    assert len(cuts) == count
    for cut in cuts:
        assert sorted(cut.partners) == sorted(set(range(1, n + 1)) - {cut.curve})


def test_m4_crossing_lists(m4):
    expected = {
        1: [2, 5, 4, 6, 3, 7],
        2: [3, 1, 3],
        3: [2, 4, 6, 5, 1, 5, 6, 4, 2],
        4: [5, 3, 5, 1, 5, 3, 5],
        5: [4, 6, 3, 6, 4, 1, 4, 6, 3, 6, 4],
        6: [7, 5, 3, 5, 1, 5, 3, 5, 7],
        7: [6, 1, 6],
    }
    got = {cl.curve: list(cl.partners) for cl in curve_crossing_lists(m4, 1)}
    assert got == expected
    assert all(cl.is_palindrome() for cl in curve_crossing_lists(m4, 1) if cl.curve != 1)


@pytest.mark.parametrize("form", known_valid_forms(), ids=lambda f: f"n{f.n}-{len(f.alpha)}")
def test_crosscut_symmetry(form):
    assert check_crosscut_symmetry(form)
    assert check_crosscut_symmetry(form.sigma, form.n)


def test_later_clusters_are_rotations(m4):
    first = {cl.curve: cl.partners for cl in curve_crossing_lists(m4, 1)}
    for k in range(2, 8):
        # cluster k sees every curve label shifted by k-1 (mod n)
        shift = lambda c: (c - 1 + k - 1) % 7 + 1  # noqa: E731
        lists = {cl.curve: cl.partners for cl in curve_crossing_lists(m4, k)}
        assert lists == {shift(c): tuple(shift(p) for p in ps) for c, ps in first.items()}


@pytest.mark.parametrize("form", known_valid_forms(), ids=lambda f: f"n{f.n}-{len(f.alpha)}")
def test_recover_cluster_form(form):
    sigma = list(form.sigma)
    rng = random.Random(form.n * 31 + len(form.alpha))
    for _ in range(40):
        i = rng.randrange(len(sigma) - 1)
        if abs(sigma[i] - sigma[i + 1]) > 1:
            sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
    cut = rng.randrange(len(sigma))
    rotated = sigma[cut:] + sigma[:cut]
    got = to_cluster_form(rotated, form.n)
    assert got is not None and validate_symmetric(got).valid
    assert same_diagram(got, form)


def test_non_symmetric_sequence_has_no_cluster_form():
    assert to_cluster_form((1, 2) * 9, 7) is None


@pytest.mark.parametrize(
    "n, alpha, polar",
    [(3, (), True), (5, (), True), (7, HAMILTON_ALPHA, True), (7, M4_ALPHA, False),
     (7, (3, 4, 3, 2), False), (7, (3, 4, 2, 3), True), (11, NEWROZ_ALPHA, False)],
)
def test_polar_flags(n, alpha, polar):
    assert check_polar_symmetry(ClusterForm(n, alpha)) is polar


def test_trace_witness_is_sound():
    # a hit certifies polar symmetry; it is not required to find one
    for form in known_valid_forms():
        if polar_trace_witness(form) is not None:
            assert check_polar_symmetry(form)
    assert polar_trace_witness(ClusterForm(7, HAMILTON_ALPHA)) is not None


def test_invalid_diagram_refused():
    with pytest.raises(InvalidDiagramError):
        check_polar_symmetry(ClusterForm(7, (4, 3, 2, 3)))


def test_n7_diagram_classes():
    hamilton, m4 = ClusterForm(7, HAMILTON_ALPHA), ClusterForm(7, M4_ALPHA)
    # commuting the middle pair gives the same drawing
    assert same_diagram(ClusterForm(7, (3, 4, 2, 3)), hamilton)
    inside_out = ClusterForm(7, (3, 4, 3, 2))
    assert not same_diagram(inside_out, m4)
    assert not same_diagram(inside_out, m4, mirror=True)
    # ... but it is M4 turned inside out
    full = full_sequence(7, m4.sigma)
    assert anchored_isomorphic(7, flip_sequence(7, full), full_sequence(7, inside_out.sigma))
    assert not same_diagram(hamilton, m4) and not same_diagram(hamilton, m4, mirror=True)


def _border(n):
    out = []
    for k in range(n - 2, 2, -2):
        out += [k, k + 1]
    return out + [2]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([7, 11, 13]), st.data())
def test_mirror_region_correspondence(n, data):
    """Closures left of the crosscut, plus C1, are the openings right of it."""
    alpha = data.draw(
        st.lists(st.integers(2, n - 3), min_size=as_order(n).alpha_length,
                 max_size=as_order(n).alpha_length)
    )
    rho, delta = canonical_parts(n)
    word = list(rho) + alpha + list(delta) + [1] + list(mirror_alpha(alpha)) + _border(n)
    rank = canonical_start(n)
    closed, opened = [], []
    for x in word:
        closed.append(frozenset(rank[:x]))
        rank[x - 1], rank[x] = rank[x], rank[x - 1]
        opened.append(frozenset(rank[:x]))
    c = len(rho) + len(alpha)
    left = sorted(sorted(s | {0}) for s in closed[:c])
    right = sorted(sorted(s) for s in opened[-c:])
    assert left == right


@pytest.mark.parametrize("form", [f for f in known_valid_forms() if f.n >= 5],
                         ids=lambda f: f"n{f.n}-{len(f.alpha)}")
def test_left_of_crosscut_kpoints(form):
    left = Counter(form.sigma[: form.crosscut_position])
    table = k_point_table(form.n)
    assert {k: left.get(k, 0) for k in range(1, form.n)} == {k: table.r(k) for k in range(1, form.n)}


def test_shift_is_full_cycle(newroz):
    perm = shift_permutation(11, newroz.sigma)
    seen, x = set(), 0
    while x not in seen:
        seen.add(x)
        x = perm[x]
    assert len(seen) == 11
