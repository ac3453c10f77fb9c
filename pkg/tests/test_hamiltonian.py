import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pegembed.embedder import EmbedderConfig, Embedding, embed_biclique
from pegembed.hamiltonian import (LogicalIsing, PhysicalIsing, brute_force_ground, check_embedding,
                                  default_chain_strength, embed_parameters, energy,
                                  spins_from_index, unembed_sample)
from pegembed.lattice import LatticeParams, build_lattice

P4 = LatticeParams(4, 12)
G4 = build_lattice(P4)


@pytest.fixture(scope="module")
def pair(g16):
    # visible 0 and hidden 0 of the K(8, 16) layout
    return Embedding([[180, 181]], [[2970, 2971]], {"M": 16, "alpha": 12})


def test_zero_model_k11(pair, g16):
    phys = embed_parameters(LogicalIsing(1, 1), pair, 1.0, g16)
    assert set(phys.h.values()) == {0.0}
    assert phys.J == {(180, 181): -1.0, (2970, 2971): -1.0, (180, 2970): 0.0}


def test_bias_split(pair, g16):
    phys = embed_parameters(LogicalIsing(1, 1, h=[1.0, -3.0]), pair, 1.0, g16)
    assert phys.h == {180: 0.5, 181: 0.5, 2970: -1.5, 2971: -1.5}


def test_designated_coupler(g16, cfg16):
    e = embed_biclique(8, 16, cfg16, g16)
    phys = embed_parameters(LogicalIsing(8, 16, J={(0, 0): 0.7}), e, 1.0, g16)
    assert phys.J[(180, 2970)] == 0.7
    owner = {q: i for i, c in enumerate(e.chains) for q in c}
    between = [k for k in phys.J if {owner[k[0]], owner[k[1]]} == {0, 8}]
    assert min(between) == (180, 2970)
    assert all(phys.J[k] == 0.0 for k in between if k != (180, 2970))


def test_graph_defaults_to_recorded_lattice(pair, g16):
    m = LogicalIsing(1, 1, h=[0.2, 0.1], J={(0, 0): -1.0})
    assert embed_parameters(m, pair, 2.0).to_dict() == embed_parameters(m, pair, 2.0, g16).to_dict()


def test_missing_coupler_error(g16):
    e = Embedding([[180]], [[3150]], {"M": 16, "alpha": 12})
    with pytest.raises(ValueError, match=r"\(0, 0\)"):
        embed_parameters(LogicalIsing(1, 1, J={(0, 0): 1.0}), e, 1.0, g16)
    # a zero coupling needs no coupler
    embed_parameters(LogicalIsing(1, 1), e, 1.0, g16)


def test_bad_inputs(pair, g16):
    with pytest.raises(ValueError):
        embed_parameters(LogicalIsing(1, 1), pair, 0.0, g16)
    with pytest.raises(ValueError):
        embed_parameters(LogicalIsing(2, 1), pair, 1.0, g16)
    with pytest.raises(ValueError):
        LogicalIsing(1, 1, J={(1, 0): 1.0})
    with pytest.raises(ValueError):
        LogicalIsing(1, 1, h=[0.0])
    overlapping = Embedding([[180, 181]], [[181]], {"M": 16, "alpha": 12})
    with pytest.raises(ValueError):
        embed_parameters(LogicalIsing(1, 1), overlapping, 1.0, g16)


# unembedding -------------------------------------------------------------------

def test_unembed_examples():
    e = Embedding([[180, 181]], [[5, 6, 7]])
    r = unembed_sample({180: 1, 181: 1, 5: 1, 6: 1, 7: -1}, e)
    assert r.sample.tolist() == [1, 1]
    assert r.broken.tolist() == [False, True]
    assert r.chain_break_fraction == 0.5
    # tie goes to the lowest id, wherever it sits in the chain
    tie = Embedding([[181, 180]], [[9]])
    r = unembed_sample({180: -1, 181: 1, 9: 1}, tie)
    assert r.sample.tolist() == [-1, 1] and r.broken.tolist() == [True, False]


def test_unembed_missing_value():
    with pytest.raises(KeyError):
        unembed_sample({180: 1}, Embedding([[180, 181]], []))


# energy and brute force ----------------------------------------------------------

def test_energy_examples():
    assert energy(PhysicalIsing({0: 1.0}), [1]) == 1.0
    zero = LogicalIsing(2, 2)
    assert all(energy(zero, s) == 0.0 for s in itertools.product((-1, 1), repeat=4))
    m = PhysicalIsing({3: 0.5}, {(3, 9): -2.0})
    assert energy(m, {3: 1, 9: -1}) == 0.5 + 2.0
    with pytest.raises(ValueError):
        energy(m, [1])


def test_brute_force_examples():
    e, s = brute_force_ground(PhysicalIsing({0: 1.0}))
    assert e == -1.0 and s.tolist() == [[-1]]
    e, s = brute_force_ground(PhysicalIsing({}, {(0, 1): -1.0}))
    assert e == -1.0 and s.tolist() == [[-1, -1], [1, 1]]


def test_k11_through_length_two_chains(pair, g16):
    logical = LogicalIsing(1, 1, J={(0, 0): 1.0})
    res = check_embedding(logical, pair, g16, chain_strength=2.0)
    assert res["match"]
    assert res["unembedded_ground_states"] == [(-1, 1), (1, -1)]


def test_brute_force_limit():
    with pytest.raises(ValueError, match="limit"):
        brute_force_ground(PhysicalIsing({q: 1.0 for q in range(25)}))
    with pytest.raises(ValueError):
        brute_force_ground(PhysicalIsing({q: 1.0 for q in range(5)}), limit=4)


def test_spins_from_index_order():
    assert spins_from_index(6, 3).tolist() == [[-1, 1, 1]]


def exhaustive_minimisers(model):
    """Direct enumeration with the energy function, independent of the kernels."""
    n = model.n_variables
    states = [np.array(s) for s in itertools.product((-1, 1), repeat=n)]
    es = [energy(model, s) for s in states]
    lo = min(es)
    return lo, sorted(tuple(s.tolist()) for s, e in zip(states, es) if e <= lo + 1e-9)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_brute_force_matches_direct_enumeration(V, H, seed):
    model = LogicalIsing.random(V, H, np.random.default_rng(seed), values=(-1.0, -0.5, 0.0, 0.5, 1.0))
    e, s = brute_force_ground(model)
    lo, states = exhaustive_minimisers(model)
    assert np.isclose(e, lo)
    assert sorted(map(tuple, s.tolist())) == states


# invariants -----------------------------------------------------------------------

@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_gauge_symmetry(V, H, seed):
    rng = np.random.default_rng(seed)
    m = LogicalIsing.random(V, H, rng)
    m.h[:] = 0.0
    s = rng.choice([-1, 1], size=V + H)
    assert energy(m, s) == energy(m, -s)


@given(st.integers(1, 10), st.integers(1, 16), st.integers(0, 2 ** 32 - 1))
def test_parameter_conservation(V, H, seed):
    rng = np.random.default_rng(seed)
    m = LogicalIsing.random(V, H, rng, values=(-1.0, -0.25, 0.5, 1.0))
    e = embed_biclique(V, H, EmbedderConfig(P4), G4)
    phys = embed_parameters(m, e, 3.0, G4)
    assert np.isclose(sum(phys.h.values()), m.h.sum())
    owner = {q: i for i, c in enumerate(e.chains) for q in c}
    inter = sum(v for (a, b), v in phys.J.items() if owner[a] != owner[b])
    intra = [v for (a, b), v in phys.J.items() if owner[a] == owner[b]]
    assert np.isclose(inter, sum(m.J.values()))
    assert set(intra) <= {-3.0}
    assert set(phys.J) <= G4.coupler_set()


ORACLE_CASES = [(a, b) for a in range(1, 5) for b in range(1, 5) if a + b <= 5]


@pytest.mark.parametrize("V, H", ORACLE_CASES)
@pytest.mark.parametrize("layout", ["default", "long-chains"])
def test_oracle_agreement(V, H, layout):
    cfg = EmbedderConfig(P4) if layout == "default" else EmbedderConfig(P4, m=1, n=2, visible_start=20)
    e = embed_biclique(V, H, cfg, G4)
    rng = np.random.default_rng(1000 * V + H)
    for _ in range(20):
        logical = LogicalIsing.random(V, H, rng)
        res = check_embedding(logical, e, G4)
        assert res["chain_strength"] == default_chain_strength(logical)
        assert res["match"], res
        assert res["broken_ground_states"] == 0


def test_weak_chains_break():
    # a frustrated square: with a tiny chain strength some chain breaks
    e = embed_biclique(2, 2, EmbedderConfig(P4, m=1, n=1, visible_start=20), G4)
    assert all(len(c) == 2 for c in e.chains)
    logical = LogicalIsing(2, 2, J={(0, 0): 1.0, (0, 1): 1.0, (1, 0): 1.0, (1, 1): -1.0})
    res = check_embedding(logical, e, G4, chain_strength=0.1)
    assert not res["match"] and res["broken_ground_states"] > 0


def test_serialisation(pair, g16):
    m = LogicalIsing(1, 1, h=[0.5, -0.5], J={(0, 0): 1.0})
    assert LogicalIsing.from_dict(m.to_dict()).to_dict() == m.to_dict()
    phys = embed_parameters(m, pair, 2.0, g16)
    d = phys.to_dict()
    assert list(d["h"]) == ["180", "181", "2970", "2971"]
    assert d["J"] == sorted(d["J"])
    assert all(a < b for a, b, _ in d["J"])
    assert PhysicalIsing.from_dict(d).to_dict() == d
    assert phys.to_json().endswith("\n")
