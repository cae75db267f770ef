import json
import math

import numpy as np
import pytest

from statediv import (
    FileFormatError,
    SymmetryOp,
    ValidationError,
    haar_unitary,
    random_state,
    rng_for,
    wigner_probes,
)
from statediv.files import (
    DivergenceTable,
    format_divergence,
    read_probe_images,
    read_state,
    read_symmetry,
    read_table,
    write_probe_images,
    write_state,
    write_symmetry,
    write_table,
)


class TestStateFiles:
    def test_roundtrip_bit_exact(self, tmp_path):
        state = random_state(4, rng=rng_for(41))
        path1 = tmp_path / "a.json"
        path2 = tmp_path / "b.json"
        write_state(path1, state)
        loaded = read_state(path1)
        np.testing.assert_array_equal(loaded.matrix, state.matrix)
        write_state(path2, loaded)
        assert path1.read_bytes() == path2.read_bytes()

    def test_rejects_invalid_state(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0] * 2] * 2}))
        with pytest.raises(ValidationError):
            read_state(path)  # trace 2

    def test_rejects_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(FileFormatError):
            read_state(path)

    def test_rejects_wrong_shape(self, tmp_path):
        path = tmp_path / "shape.json"
        path.write_text(json.dumps({"dim": 3, "re": [[1.0]], "im": [[0.0]]}))
        with pytest.raises(FileFormatError):
            read_state(path)

    def test_rejects_bad_dim(self, tmp_path):
        path = tmp_path / "dim.json"
        path.write_text(json.dumps({"dim": 0, "re": [], "im": []}))
        with pytest.raises(FileFormatError):
            read_state(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileFormatError):
            read_state(tmp_path / "missing.json")


class TestSymmetryFiles:
    def test_roundtrip(self, tmp_path):
        op = SymmetryOp(matrix=haar_unitary(3, rng_for(42)), antiunitary=True)
        path = tmp_path / "u.json"
        write_symmetry(path, op)
        loaded = read_symmetry(path)
        assert loaded.antiunitary
        np.testing.assert_array_equal(loaded.matrix, op.matrix)

    def test_rejects_non_unitary(self, tmp_path):
        path = tmp_path / "u.json"
        path.write_text(
            json.dumps(
                {"dim": 2, "antiunitary": False, "re": [[2.0, 0.0], [0.0, 1.0]], "im": [[0.0] * 2] * 2}
            )
        )
        with pytest.raises(ValidationError):
            read_symmetry(path)

    def test_requires_flag(self, tmp_path):
        path = tmp_path / "u.json"
        path.write_text(json.dumps({"dim": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0] * 2] * 2}))
        with pytest.raises(FileFormatError):
            read_symmetry(path)


class TestProbeImageFiles:
    def test_roundtrip_preserves_canonical_order(self, tmp_path):
        op = SymmetryOp(matrix=haar_unitary(3, rng_for(43)), antiunitary=False)
        images = [op.apply_projection(p) for p in wigner_probes(3)]
        path = tmp_path / "probes.json"
        write_probe_images(path, images)
        loaded = read_probe_images(path)
        assert len(loaded) == len(images)
        for got, want in zip(loaded, images):
            np.testing.assert_allclose(got.matrix, want.matrix, atol=1e-12)

    def test_reorders_shuffled_entries(self, tmp_path):
        images = wigner_probes(2)
        path = tmp_path / "probes.json"
        write_probe_images(path, images)
        obj = json.loads(path.read_text())
        obj["images"] = obj["images"][::-1]
        path.write_text(json.dumps(obj))
        loaded = read_probe_images(path)
        for got, want in zip(loaded, images):
            np.testing.assert_allclose(got.matrix, want.matrix, atol=1e-12)

    def test_missing_label_rejected(self, tmp_path):
        images = wigner_probes(2)
        path = tmp_path / "probes.json"
        write_probe_images(path, images)
        obj = json.loads(path.read_text())
        obj["images"] = obj["images"][:-1]
        path.write_text(json.dumps(obj))
        with pytest.raises(FileFormatError):
            read_probe_images(path)

    def test_non_pure_image_rejected(self, tmp_path):
        path = tmp_path / "probes.json"
        images = wigner_probes(2)
        write_probe_images(path, images)
        obj = json.loads(path.read_text())
        obj["images"][0]["re"] = [[0.5, 0.0], [0.0, 0.5]]
        obj["images"][0]["im"] = [[0.0, 0.0], [0.0, 0.0]]
        path.write_text(json.dumps(obj))
        with pytest.raises(ValidationError):
            read_probe_images(path)


class TestTableFiles:
    def test_roundtrip_with_inf(self, tmp_path):
        table = DivergenceTable(
            kind="bregman",
            generator="xlogx",
            labels=("a", "b"),
            values=((0.0, math.inf), (0.42, 0.0)),
        )
        path = tmp_path / "t.json"
        write_table(path, table)
        raw = json.loads(path.read_text())
        assert raw["values"][0][1] == "inf"
        loaded = read_table(path)
        assert loaded.values[0][1] == math.inf
        assert loaded.values[1][0] == 0.42

    def test_inf_forbidden_for_jensen(self):
        with pytest.raises(ValidationError):
            DivergenceTable(
                kind="jensen", generator="xlogx", labels=("a", "b"), values=((0.0, math.inf), (1.0, 0.0))
            )

    def test_inf_forbidden_for_finite_class_generator(self):
        with pytest.raises(ValidationError):
            DivergenceTable(
                kind="bregman",
                generator="quadratic",
                labels=("a", "b"),
                values=((0.0, math.inf), (1.0, 0.0)),
            )

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValidationError):
            DivergenceTable(kind="jensen", generator="quadratic", labels=("a",), values=((0.1,),))

    def test_bad_kind_rejected(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps({"kind": "renyi", "generator": "x", "labels": [], "values": []}))
        with pytest.raises(FileFormatError):
            read_table(path)


class TestFormatting:
    def test_fixed_twelve_decimals(self):
        assert format_divergence(2.0) == "2.000000000000"
        assert format_divergence(math.log(2.0)) == "0.693147180560"
        assert format_divergence(math.inf) == "inf"
