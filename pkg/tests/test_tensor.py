"""
Tests for the tensor core: layout, unfoldings, mode products, contractions
and the binary container.

Oracles are brute-force loops over every multi-index.
"""

import itertools
import struct

import numpy as np
import pytest

from src.errors import ContainerError, DimensionError
from src.tensor import (
    MAX_ORDER,
    DenseTensor,
    container,
    contract_leading,
    fold,
    hadamard,
    khatri_rao,
    kron,
    mode_product,
    mode_vec_product,
    outer,
    unfold,
)


def all_shapes(max_order=4, max_dim=4):
    for order in range(1, max_order + 1):
        for shape in itertools.product(range(1, max_dim + 1), repeat=order):
            yield shape


def random_tensor(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def column_of(index, shape, k):
    """Reverse-lexicographic merge of every index except mode k"""
    col, stride = 0, 1
    for mode, (i, dim) in enumerate(zip(index, shape)):
        if mode == k:
            continue
        col += i * stride
        stride *= dim
    return col


class TestDenseTensor:
    """Test layout and construction"""

    def test_first_index_fastest(self):
        t = DenseTensor(shape=(2, 3), data=np.arange(6))
        assert t[1, 0] == 1
        assert t[0, 1] == 2
        assert t.offset((1, 2)) == 5

    def test_from_array_round_trip(self, rng):
        a = random_tensor(rng, (3, 2, 4))
        t = DenseTensor.from_array(a)
        assert np.array_equal(t.array, a)
        assert t[2, 1, 3] == a[2, 1, 3]

    def test_integer_data_becomes_complex(self):
        t = DenseTensor(shape=(2,), data=[1, 2])
        assert t.data.dtype == np.complex128
        assert not t.is_real

    def test_real_data_stays_real(self):
        t = DenseTensor.from_array(np.ones((2, 2)))
        assert t.is_real

    def test_data_is_read_only(self, rng):
        t = DenseTensor.from_array(random_tensor(rng, (2, 2)))
        with pytest.raises(ValueError):
            t.data[0] = 1.0

    def test_wrong_length_rejected(self):
        with pytest.raises(DimensionError):
            DenseTensor(shape=(2, 3), data=np.zeros(5))

    def test_order_limits(self):
        with pytest.raises(DimensionError):
            DenseTensor(shape=(1,) * (MAX_ORDER + 1), data=np.zeros(1))
        with pytest.raises(DimensionError):
            DenseTensor(shape=(2, 0), data=np.zeros(0))

    def test_out_of_range_index(self):
        t = DenseTensor(shape=(2, 2), data=np.zeros(4))
        with pytest.raises(DimensionError):
            t.offset((2, 0))

    def test_norm(self):
        t = DenseTensor(shape=(2, 2), data=[3, 0, 0, 4])
        assert t.norm() == pytest.approx(5.0)


class TestUnfoldOracle:
    """Unfold/fold against the loop oracle on every shape with dims <= 4, order <= 4"""

    def test_unfold_matches_oracle(self, rng):
        for shape in all_shapes():
            a = random_tensor(rng, shape)
            for k in range(len(shape)):
                u = unfold(a, k)
                assert u.shape == (shape[k], a.size // shape[k])
                oracle = np.zeros_like(u)
                for index in itertools.product(*(range(s) for s in shape)):
                    oracle[index[k], column_of(index, shape, k)] = a[index]
                assert np.max(np.abs(u - oracle), initial=0.0) <= 1e-12

    def test_fold_inverts_unfold(self, rng):
        for shape in all_shapes(max_order=4, max_dim=3):
            a = random_tensor(rng, shape)
            for k in range(len(shape)):
                assert np.array_equal(fold(unfold(a, k), k, shape).array, a)

    def test_example_2x3(self):
        t = DenseTensor(shape=(2, 3), data=[1, 2, 3, 4, 5, 6])
        assert np.array_equal(unfold(t, 0), [[1, 3, 5], [2, 4, 6]])
        assert np.array_equal(unfold(t, 1), [[1, 2], [3, 4], [5, 6]])

    def test_bad_mode(self):
        with pytest.raises(DimensionError):
            unfold(np.zeros((2, 2)), 2)


class TestModeProducts:
    """Mode products and contractions against loop oracles"""

    def test_mode_product_matches_oracle(self, rng):
        for shape in all_shapes(max_order=3, max_dim=3):
            a = random_tensor(rng, shape)
            for k in range(len(shape)):
                q = random_tensor(rng, (2, shape[k]))
                out = mode_product(a, k, q).array
                new_shape = shape[:k] + (2,) + shape[k + 1:]
                oracle = np.zeros(new_shape, dtype=complex)
                for index in itertools.product(*(range(s) for s in new_shape)):
                    for b in range(shape[k]):
                        src_index = index[:k] + (b,) + index[k + 1:]
                        oracle[index] += q[index[k], b] * a[src_index]
                assert np.max(np.abs(out - oracle)) <= 1e-12

    def test_mode_product_is_unfolding_product(self, rng):
        a = random_tensor(rng, (3, 4, 2))
        q = random_tensor(rng, (5, 4))
        assert np.allclose(unfold(mode_product(a, 1, q), 1), q @ unfold(a, 1), atol=1e-12)

    def test_mode_product_dimension_mismatch(self, rng):
        with pytest.raises(DimensionError):
            mode_product(random_tensor(rng, (3, 4)), 1, np.ones((2, 3)))

    def test_mode_vec_product_drops_mode(self, rng):
        a = random_tensor(rng, (3, 4, 2))
        v = random_tensor(rng, (4,))
        out = mode_vec_product(a, 1, v)
        assert out.shape == (3, 2)
        oracle = np.einsum('ijk,j->ik', a, v)
        assert np.allclose(out.array, oracle, atol=1e-12)

    def test_contract_leading_matches_oracle(self, rng):
        for shape in all_shapes(max_order=3, max_dim=4):
            x = random_tensor(rng, (3,) + shape)
            s = random_tensor(rng, shape)
            out = contract_leading(x, s)
            oracle = np.array([
                sum(x[(n,) + index] * s[index] for index in itertools.product(*(range(d) for d in shape)))
                for n in range(3)
            ])
            assert np.max(np.abs(out - oracle)) <= 1e-12

    def test_contract_leading_shape_mismatch(self, rng):
        with pytest.raises(DimensionError):
            contract_leading(np.zeros((3, 2, 2)), np.zeros((2, 3)))


class TestProducts:
    """Kronecker, Khatri-Rao, Hadamard and outer products"""

    def test_khatri_rao_columns_are_kronecker(self, rng):
        a, b = random_tensor(rng, (3, 2)), random_tensor(rng, (4, 2))
        kr = khatri_rao(a, b)
        assert kr.shape == (12, 2)
        for r in range(2):
            assert np.allclose(kr[:, r], kron(a[:, r], b[:, r]))

    def test_khatri_rao_column_mismatch(self):
        with pytest.raises(DimensionError):
            khatri_rao(np.ones((2, 2)), np.ones((2, 3)))

    def test_hadamard_shape_mismatch(self):
        with pytest.raises(DimensionError):
            hadamard(np.ones(2), np.ones(3))

    def test_outer_vectorizes_as_kronecker(self, rng):
        """vec(a o b o c) = kron(c, kron(b, a)) in first-index-fastest order"""
        a, b, c = (random_tensor(rng, (n,)) for n in (2, 3, 4))
        t = outer(a, b, c)
        assert t.shape == (2, 3, 4)
        assert np.allclose(t.vectorize(), kron(c, kron(b, a)))


class TestContainer:
    """Binary container format"""

    def test_byte_layout(self):
        t = DenseTensor(shape=(2,), data=[1 + 2j, 3])
        buf = container.to_bytes(t)
        assert buf[:4] == b"GMPT"
        assert struct.unpack_from("<QQ", buf, 4) == (1, 2)
        assert np.array_equal(np.frombuffer(buf[20:], dtype="<c16"), [1 + 2j, 3])

    def test_file_round_trip_is_exact(self, rng, tmp_path):
        t = DenseTensor.from_array(random_tensor(rng, (3, 2, 2)))
        path = container.save(t, tmp_path / "t.gmpt")
        back = container.load(path)
        assert back.shape == t.shape
        assert np.array_equal(back.data, t.data)

    def test_concatenated_payloads(self, rng):
        a = DenseTensor.from_array(random_tensor(rng, (2, 2)))
        b = DenseTensor.from_array(rng.standard_normal(3))
        buf = container.to_bytes(a) + container.to_bytes(b)
        first, pos = container.from_bytes(buf)
        second, end = container.from_bytes(buf, pos, real=True)
        assert end == len(buf)
        assert np.array_equal(first.data, a.data)
        assert second.is_real and np.array_equal(second.data, b.data)

    def test_bad_magic(self):
        with pytest.raises(ContainerError):
            container.from_bytes(b"XXXX" + bytes(16))

    def test_truncated_data(self):
        buf = container.to_bytes(DenseTensor(shape=(4,), data=np.ones(4)))
        with pytest.raises(ContainerError):
            container.from_bytes(buf[:-1])

    def test_trailing_bytes_rejected(self, tmp_path):
        path = tmp_path / "t.gmpt"
        path.write_bytes(container.to_bytes(DenseTensor(shape=(1,), data=[1.0])) + b"\0")
        with pytest.raises(ContainerError):
            container.load(path)

    def test_real_request_on_complex_data(self):
        buf = container.to_bytes(DenseTensor(shape=(1,), data=[1j]))
        with pytest.raises(ContainerError):
            container.from_bytes(buf, real=True)
