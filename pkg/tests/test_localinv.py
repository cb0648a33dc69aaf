import numpy as np
import pytest

from seqinv.gf2 import BitVec
from seqinv.golomb import FsrSpec
from seqinv.localinv import (
    BlackBoxMap,
    iterate_map,
    load_table,
    local_invert,
    make_fsr_map,
    make_permutation_map,
    make_table_map,
    parse_map_spec,
    predecessors,
)


def cycle_length(f: BlackBoxMap, x: int) -> int:
    y, k = f.apply_int(x), 1
    while y != x:
        y, k = f.apply_int(y), k + 1
    return k


def test_fsr_map_example():
    f = parse_map_spec("fsr:m=3;g=x1")
    y = BitVec.from_str("100")
    res = local_invert(f, y, 16)
    assert res.verified and str(res.candidate) == "110"
    assert predecessors(f, y) == [res.candidate]


def test_iterate_map_layout():
    f = make_fsr_map(FsrSpec.parse("m=3; g=x1"))
    seq = iterate_map(f, [1, 0, 0], 4)
    arr = seq.array()
    assert arr.shape == (3, 4)
    assert arr[:, 0].tolist() == [1, 0, 0]
    assert arr[:, 1].tolist() == f.apply([1, 0, 0]).to_array().tolist()
    with pytest.raises(ValueError):
        iterate_map(f, [1, 0], 4)
    with pytest.raises(ValueError):
        iterate_map(f, [1, 0, 0], 1)


def test_permutation_maps_two_periods():
    for seed in range(6):
        f = make_permutation_map(seed, 6)
        y = BitVec.from_bits(np.random.default_rng(seed).integers(0, 2, 6))
        x = int(sum(int(b) << i for i, b in enumerate(y.to_array())))
        period = cycle_length(f, x)
        res = local_invert(f, y, max(2 * period, 4))
        assert res.verified
        assert [res.candidate] == predecessors(f, y)


def test_unverified_candidate_is_flagged():
    # constant map: y = 0 has no predecessor, so nothing can verify
    f = make_table_map([1, 1, 1, 1])
    res = local_invert(f, [0, 0], 6)
    assert not res.verified
    assert predecessors(f, [0, 0]) == []


def test_table_file_roundtrip(tmp_path):
    perm = np.random.default_rng(3).permutation(16).astype("<u4")
    path = tmp_path / "t.bin"
    path.write_bytes(perm.tobytes())
    f = parse_map_spec(f"table:{path}")
    assert f.n == 4
    assert [f.apply_int(i) for i in range(16)] == perm.tolist()
    assert load_table(path).n == 4
    path.write_bytes(b"\x00" * 6)
    with pytest.raises(ValueError):
        load_table(path)


def test_map_validation():
    with pytest.raises(ValueError):
        make_table_map([0, 1, 2])
    with pytest.raises(ValueError):
        make_table_map([0, 4, 1, 2])
    with pytest.raises(ValueError):
        make_permutation_map(0, 25)
    for bad in ["perm:seed=1", "perm:n=3;seed", "zzz:1", "fsr:m=3"]:
        with pytest.raises(ValueError):
            parse_map_spec(bad)
    f = parse_map_spec("perm:seed=7;n=5")
    assert f.n == 5 and f.calls == 0
    f.apply([0] * 5)
    assert f.calls == 1
