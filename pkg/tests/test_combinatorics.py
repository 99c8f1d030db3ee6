import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ninepoints.combinatorics import (
    ALL_TRIPLES,
    IncidenceStructure,
    SharedPairError,
    automorphism_count,
    canonical_form,
    canonical_key,
    compatible,
    extend_level,
    isomorphic,
    isomorphism,
    make_structure,
    structure,
)


def test_make_structure_normalizes():
    s = make_structure([(2, 1, 0)])
    assert s.level == 1 and s.blocks == ((0, 1, 2),)
    assert make_structure([(3, 4, 5), (0, 1, 2), (0, 1, 2)]) == structure("012, 345")


def test_shared_pair_rejected():
    with pytest.raises(SharedPairError):
        make_structure([(0, 1, 2), (0, 1, 3)])


def test_labels_checked():
    with pytest.raises(ValueError):
        make_structure([(0, 1, 9)])


def test_compatible():
    assert not compatible(structure("012"), (0, 1, 3))
    assert compatible(structure("012"), (0, 3, 4))
    assert compatible(structure("012, 034"), (1, 3, 5))


def test_canonical_key_examples():
    assert canonical_key(structure("347")) == canonical_key(structure("012"))
    assert canonical_key(structure("012, 345")) != canonical_key(structure("012, 034"))
    assert isomorphic(structure("012"), structure("347"))
    assert not isomorphic(structure("012, 034"), structure("012, 345"))


def test_key_is_a_block_list_of_an_isomorphic_copy():
    s = structure("012, 034, 056, 135, 146, 367, 458")
    form = canonical_form(s)
    assert isomorphic(form, s)
    assert canonical_key(form) == canonical_key(s)
    assert canonical_key(s) == ",".join("".join(map(str, b)) for b in form.blocks)


def test_isomorphism_maps_blocks():
    a = structure("012, 034, 056, 135, 146, 367, 458")
    perm = [3, 7, 0, 5, 8, 1, 2, 6, 4]
    b = a.relabel(perm)
    f = isomorphism(a, b)
    assert f is not None and a.relabel(f) == b
    assert isomorphism(structure("012, 034"), structure("012, 345")) is None


@st.composite
def structures(draw):
    blocks = []
    for t in draw(st.permutations(ALL_TRIPLES)):
        if all(len(set(t) & set(b)) <= 1 for b in blocks):
            blocks.append(t)
        if len(blocks) >= draw(st.integers(0, 8)):
            break
    return make_structure(blocks)


@settings(max_examples=60, deadline=None)
@given(structures(), st.permutations(range(9)))
def test_key_invariant_under_relabeling(s, perm):
    assert canonical_key(s.relabel(perm)) == canonical_key(s)
    assert automorphism_count(s.relabel(perm)) == automorphism_count(s)


@settings(max_examples=40, deadline=None)
@given(structures())
def test_automorphisms_divide_group_order(s):
    assert 362880 % automorphism_count(s) == 0


def test_automorphism_counts_match_brute_force(catalog):
    rng = random.Random(5)
    sample = [structure("012"), structure("012, 345, 678")]
    sample += [rng.choice(catalog.levels[lvl]) for lvl in range(2, 13)]
    for s in sample:
        assert automorphism_count(s) == oracles.automorphisms(s.blocks), str(s)
    assert automorphism_count(IncidenceStructure(())) == 362880


def test_named_automorphism_counts(catalog):
    assert automorphism_count(structure("012")) == 4320
    assert automorphism_count(catalog.levels[12][0]) == 432


def test_low_level_counts_match_orbit_oracle(catalog):
    images = oracles.triple_images()
    for level in (1, 2, 3, 4):
        assert len(catalog.levels[level]) == oracles.orbit_count(level, images)


def test_extend_level_steps(catalog):
    assert len(extend_level([structure("012")])) == 2
    assert len(extend_level(catalog.levels[2])) == 5
    assert extend_level(catalog.levels[12]) == []


def test_catalog_counts(catalog):
    assert catalog.counts() == [1, 2, 5, 11, 19, 34, 41, 31, 12, 4, 1, 1]
    assert catalog.m == 12
    assert len(catalog) == 162


def test_catalog_is_isomorph_free_and_valid(catalog):
    for level, reps in catalog.levels.items():
        keys = [canonical_key(s) for s in reps]
        assert len(set(keys)) == len(keys)
        for s in reps:
            assert s.level == level
            for a, b in itertools.combinations(s.blocks, 2):
                assert len(set(a) & set(b)) <= 1


def test_level_three_list(catalog):
    expected = ["012, 034, 056", "012, 034, 135", "012, 034, 156", "012, 034, 567", "012, 345, 678"]
    assert {canonical_key(structure(x)) for x in expected} == {canonical_key(s) for s in catalog.levels[3]}
