import random

import pytest

from binpack3d.geometry import BinSpec, CaseSpec, Instance, Packing, Placement


@pytest.fixture
def tiny_instance():
    """One 3x2x1 case in a 10x10x10 bin."""
    return Instance("tiny", (CaseSpec(0, 3, 2, 1),), (BinSpec(0, 10, 10, 10),))


@pytest.fixture
def two_case_instance():
    return Instance(
        "two",
        (CaseSpec(0, 4, 3, 2), CaseSpec(1, 2, 2, 2)),
        (BinSpec(0, 8, 8, 8),),
    )


def make_instance(tag, rng: random.Random, max_cases: int = 4, max_bins: int = 2,
                  support=None) -> Instance:
    """Random instance with dims proportionate to the bin, so the exact
    grid stays small."""
    bin_dims = [round(rng.uniform(6.0, 10.0), 1) for _ in range(3)]
    specs = []
    total = 0
    sid = 0
    target = rng.randint(2, max_cases)
    while total < target:
        qty = min(rng.randint(1, 2), target - total)
        specs.append(CaseSpec(
            sid,
            round(rng.uniform(2.0, bin_dims[0] * 0.8), 2),
            round(rng.uniform(2.0, bin_dims[1] * 0.8), 2),
            round(rng.uniform(2.0, bin_dims[2] * 0.8), 2),
            quantity=qty))
        total += qty
        sid += 1
    bins = (BinSpec(0, *bin_dims, quantity=rng.randint(1, max_bins)),)
    return Instance(f"rand-{tag}", tuple(specs), bins, support)


def random_packing(inst: Instance, rng: random.Random) -> Packing:
    """Uniformly random placements; usually infeasible."""
    placements = []
    for i in range(inst.num_cases):
        j = rng.randrange(inst.num_bins)
        x0, x1 = inst.bin_window(j)
        placements.append(Placement(
            i, j,
            round(rng.uniform(x0, x1), 2),
            round(rng.uniform(0, inst.bins[j].width), 2),
            round(rng.uniform(0, inst.bins[j].height), 2),
            rng.randint(1, 6)))
    return Packing(tuple(placements))


def stacked_packing(inst: Instance) -> Packing:
    """All cases piled into one column of bin 0 (tests support credit)."""
    z = 0.0
    placements = []
    for i, case in enumerate(inst.cases):
        placements.append(Placement(i, 0, 0.0, 0.0, z, 1))
        z += case.height
    return Packing(tuple(placements))
