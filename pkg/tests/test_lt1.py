import numpy as np
import pytest

from l1tucker.decomposition import TuckerModel, hosvd
from l1tucker.lt1 import (
    Lt1FormatError,
    model_from_bytes,
    model_to_bytes,
    read_model,
    read_tensor,
    tensor_from_bytes,
    tensor_to_bytes,
    write_model,
    write_tensor,
)


class TestTensorRecord:
    def test_round_trip_bits(self, rng, tmp_path):
        x = rng.standard_normal((3, 4, 2))
        x[0, 0, 0] = -0.0
        x[1, 2, 1] = np.finfo(np.float64).tiny
        path = tmp_path / "t.lt1"
        write_tensor(path, x)
        back = read_tensor(path)
        assert back.shape == x.shape
        np.testing.assert_array_equal(
            back.ravel(order="F").view(np.uint64), x.ravel(order="F").view(np.uint64)
        )

    def test_layout_is_first_index_fastest(self, tmp_path):
        x = np.arange(6.0).reshape((2, 3), order="F")
        buf = tensor_to_bytes(x)
        values = np.frombuffer(buf[4 + 4 + 8:], dtype="<f8")
        np.testing.assert_array_equal(values, np.arange(6.0))

    def test_write_is_deterministic(self, rng):
        x = rng.standard_normal((2, 2, 2))
        assert tensor_to_bytes(x) == tensor_to_bytes(x.copy())

    def test_bad_magic(self):
        with pytest.raises(Lt1FormatError) as err:
            tensor_from_bytes(b"NOPE" + b"\x00" * 16)
        assert err.value.offset == 0

    def test_truncated_values(self, rng):
        buf = tensor_to_bytes(rng.standard_normal((2, 3)))
        with pytest.raises(Lt1FormatError) as err:
            tensor_from_bytes(buf[:-8])
        assert "values" in str(err.value)

    def test_trailing_bytes_rejected(self, rng, tmp_path):
        path = tmp_path / "t.lt1"
        path.write_bytes(tensor_to_bytes(rng.standard_normal((2, 2))) + b"x")
        with pytest.raises(Lt1FormatError):
            read_tensor(path)

    def test_zero_dimension_rejected(self):
        import struct

        buf = b"LT1\x00" + struct.pack("<I2I", 2, 0, 3)
        with pytest.raises(Lt1FormatError):
            tensor_from_bytes(buf)

    def test_one_way_tensor(self, tmp_path):
        path = tmp_path / "v.lt1"
        write_tensor(path, np.array([1.0, 2.0, 3.0]))
        np.testing.assert_array_equal(read_tensor(path), [1.0, 2.0, 3.0])


class TestModelRecord:
    def test_round_trip(self, rng, tmp_path):
        x = rng.standard_normal((4, 5, 3))
        model = hosvd(x, (2, 3, 2))
        path = tmp_path / "m.lt1m"
        write_model(path, model)
        back = read_model(path)
        assert back.ranks == model.ranks
        for a, b in zip(back.bases, model.bases):
            np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(back.core, model.core)

    def test_core_optional(self, rng):
        bases = [np.eye(3)[:, :2], np.eye(4)[:, :2]]
        model = TuckerModel(bases)
        back = model_from_bytes(model_to_bytes(model))
        assert back.core is None
        assert back.ranks == (2, 2)

    def test_core_shape_checked(self, rng):
        model = TuckerModel([np.eye(3)[:, :2]], core=np.zeros((3,)))
        with pytest.raises(Lt1FormatError):
            model_from_bytes(model_to_bytes(model))

    def test_bad_magic(self):
        with pytest.raises(Lt1FormatError):
            model_from_bytes(b"LT1\x00" + b"\x00" * 8)

    def test_basis_rank_mismatch_detected(self, rng):
        model = hosvd(rng.standard_normal((4, 4)), (2, 2))
        buf = bytearray(model_to_bytes(model))
        buf[8:12] = (3).to_bytes(4, "little")  # corrupt first rank field
        with pytest.raises(Lt1FormatError):
            model_from_bytes(bytes(buf))
