import json

import numpy as np
import pytest

from sbls import (
    Instance,
    Point,
    bilinear_map,
    gen_blind_deconv,
    gen_matrix_sensing,
    gen_planted,
    objective,
    parse,
    serialize,
)
from sbls.cli import main


def roundtrip_text(inst, kp=None, label=None):
    text = serialize(inst, kp, label)
    back = parse(text)
    return text, back


def test_roundtrip_is_bit_exact():
    rng = np.random.default_rng(0)
    inst, plant = gen_planted(4, 3, 5, 2, 2, seed=8)
    text, back = roundtrip_text(inst, plant, "planted")
    np.testing.assert_array_equal(back.instance.tensor, inst.tensor)
    np.testing.assert_array_equal(back.instance.b, inst.b)
    assert back.instance.s == inst.s and back.instance.t == inst.t
    np.testing.assert_array_equal(back.known_point.z, plant.z)
    assert back.label == "planted"
    assert serialize(back.instance, back.known_point, back.label) == text


def test_unknown_fields_rejected():
    inst, _ = gen_planted(2, 3, 3, 2, 2, seed=1)
    obj = json.loads(serialize(inst))
    obj["comment"] = "hello"
    with pytest.raises(ValueError, match="comment"):
        parse(json.dumps(obj))
    obj = json.loads(serialize(inst))
    obj["dims"]["extra"] = 5
    with pytest.raises(ValueError, match="extra"):
        parse(json.dumps(obj))


def test_schema_version_enforced():
    inst, _ = gen_planted(2, 3, 3, 2, 2, seed=1)
    obj = json.loads(serialize(inst))
    obj["schema_version"] = 2
    with pytest.raises(ValueError, match="schema_version"):
        parse(json.dumps(obj))


def test_coo_tensor_parsing():
    obj = {
        "schema_version": 1,
        "dims": {"l": 2, "m": 2, "n": 2},
        "sparsity": {"s": 1, "t": 1},
        "tensor": [[1, 1, 1, 3.5], [2, 2, 2, -1.0]],
        "b": [0.0, 0.0],
    }
    inst = parse(json.dumps(obj)).instance
    assert inst.tensor[0, 0, 0] == 3.5
    assert inst.tensor[1, 1, 1] == -1.0
    assert np.count_nonzero(inst.tensor) == 2

    obj["tensor"] = [[1, 1, 1, 1.0], [1, 1, 1, 2.0]]
    with pytest.raises(ValueError, match="duplicate"):
        parse(json.dumps(obj))
    obj["tensor"] = [[3, 1, 1, 1.0]]
    with pytest.raises(ValueError, match="entry 0"):
        parse(json.dumps(obj))


def test_dense_and_empty_tensors():
    obj = {
        "schema_version": 1,
        "dims": {"l": 1, "m": 2, "n": 2},
        "sparsity": {"s": 1, "t": 1},
        "tensor": [1.0, 2.0, 3.0, 4.0],
        "b": [0.0],
    }
    inst = parse(json.dumps(obj)).instance
    np.testing.assert_array_equal(inst.tensor.reshape(-1), [1, 2, 3, 4])
    obj["tensor"] = []
    inst = parse(json.dumps(obj)).instance
    assert not inst.tensor.any()
    obj["tensor"] = [1.0, 2.0]
    with pytest.raises(ValueError):
        parse(json.dumps(obj))


def test_known_point_length_checked():
    inst, _ = gen_planted(2, 3, 3, 2, 2, seed=1)
    obj = json.loads(serialize(inst))
    obj["known_point"] = {"z": [1.0, 0.0]}
    with pytest.raises(ValueError):
        parse(json.dumps(obj))


def test_blind_deconv_identity():
    rng = np.random.default_rng(6)
    H = rng.standard_normal((3, 4))
    G = rng.standard_normal((3, 5))
    a = gen_blind_deconv(H, G)
    for _ in range(20):
        x = rng.standard_normal(4)
        y = rng.standard_normal(5)
        np.testing.assert_allclose(bilinear_map(a, x, y), (H @ x) * (G @ y), atol=1e-12)
    with pytest.raises(ValueError):
        gen_blind_deconv(H, rng.standard_normal((4, 5)))


def test_matrix_sensing_identity():
    rng = np.random.default_rng(6)
    mats = [rng.standard_normal((4, 5)) for _ in range(3)]
    a = gen_matrix_sensing(mats)
    for _ in range(20):
        x = rng.standard_normal(4)
        y = rng.standard_normal(5)
        want = [float(np.sum(M * np.outer(x, y))) for M in mats]
        np.testing.assert_allclose(bilinear_map(a, x, y), want, atol=1e-12)
    with pytest.raises(ValueError):
        gen_matrix_sensing([mats[0], rng.standard_normal((5, 5))])


def test_gen_planted_zero_residual():
    inst, plant = gen_planted(5, 4, 6, 2, 3, seed=77)
    assert objective(inst, plant) == 0.0
    again, plant2 = gen_planted(5, 4, 6, 2, 3, seed=77)
    np.testing.assert_array_equal(again.tensor, inst.tensor)
    np.testing.assert_array_equal(plant2.z, plant.z)


def test_cli_check_and_exit_codes(tmp_path, capsys):
    inst, plant = gen_planted(4, 3, 3, 2, 2, seed=5)
    path = tmp_path / "inst.json"
    path.write_text(serialize(inst, plant, "planted"))

    assert main(["check", str(path), "--L", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["objective"] == 0.0
    assert report["flags"]["nb"] is True

    assert main(["check", str(path), "--point", "0,0,0,1,1,1"]) == 3
    capsys.readouterr()
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()
    assert main(["check", str(path), "--point", "1,2"]) == 2
    capsys.readouterr()
    assert main(["nonsense"]) == 2
    capsys.readouterr()


def test_cli_project_inline_dims(capsys):
    assert main(["project", "3,3,2,2", "--point", "0,0,3,3,-4,2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["distance_sq"] == 4.0
    assert out["representative"] == [0.0, 0.0, 1.0, 9.0, -12.0, 0.0]
    assert main(["project", "3,3,2,2", "--point", "0,0,3,3,-4,2", "--classic"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["distance_sq"] == 5.0


def test_cli_solve_and_oracle(tmp_path, capsys):
    inst, plant = gen_planted(4, 3, 3, 2, 2, seed=5)
    path = tmp_path / "inst.json"
    path.write_text(serialize(inst, plant))

    assert main(["solve", str(path), "--starts", "4", "--seed", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["final_f"] <= 1e-10
    assert out["status"] == "converged"

    assert main(["oracle", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["certified"] is True
    assert out["f"] <= 1e-12 * (1.0 + 0.5 * float(inst.b @ inst.b))


def test_cli_gen_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "gen.json"
    rc = main([
        "gen", "planted", "--l", "4", "--m", "3", "--n", "3",
        "--s", "2", "--t", "2", "--seed", "5", "--out", str(out_path),
    ])
    assert rc == 0
    capsys.readouterr()
    bundle = parse(out_path.read_text())
    assert bundle.label == "planted"
    assert objective(bundle.instance, bundle.known_point) == 0.0


def test_cli_repro_all(capsys):
    assert main(["repro", "all"]) == 0
    out = capsys.readouterr().out
    assert "repro: OK" in out
    assert "FAIL" not in out
