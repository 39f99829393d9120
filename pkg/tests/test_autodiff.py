"""自动微分: 算子取值, 反向传播与有限差分对照"""

import numpy as np
import pytest

from src.getain.autodiff import Tape, Tensor, clamp_params, ops
from src.getain.common.cons import Activation
from src.getain.common.exceptions import ContractError, DimensionError, DomainError

from .conftest import fd_gradient, rel_error


class TestTensor:
    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            Tensor([1.0, np.nan])
        with pytest.raises(DomainError):
            Tensor([np.inf])

    def test_shape_must_match_data(self):
        with pytest.raises(DimensionError):
            Tensor([1.0, 2.0, 3.0], shape=(2, 2))
        assert Tensor([1, 2, 3, 4], shape=(2, 2)).shape == (2, 2)

    def test_data_is_read_only(self):
        t = Tensor([1.0, 2.0])
        with pytest.raises(ValueError):
            t.data[0] = 5.0


class TestOps:
    def test_matmul_identity(self):
        tape = Tape()
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        out = ops.matmul(tape.constant(np.eye(2)), tape.constant(m))
        np.testing.assert_array_equal(out.value, m)

    def test_matmul_by_hand(self):
        tape = Tape()
        out = ops.matmul(tape.constant([[1.0, 2.0]]), tape.constant([[3.0], [4.0]]))
        np.testing.assert_array_equal(out.value, [[11.0]])

    def test_matmul_shape_mismatch(self):
        tape = Tape()
        with pytest.raises(DimensionError):
            ops.matmul(tape.constant(np.ones((2, 3))), tape.constant(np.ones((2, 3))))

    def test_activations(self):
        tape = Tape()
        x = tape.constant([-1.0, 0.0, 2.0])
        np.testing.assert_allclose(ops.activation(x, Activation.SIGMOID).value[1], 0.5)
        np.testing.assert_array_equal(ops.activation(x, Activation.RELU).value, [0.0, 0.0, 2.0])
        np.testing.assert_allclose(ops.activation(x, Activation.LEAKY_RELU, 0.2).value, [-0.2, 0.0, 2.0])
        np.testing.assert_allclose(ops.activation(x, Activation.TANH).value, np.tanh([-1.0, 0.0, 2.0]))

    def test_relu_subgradient_at_zero(self):
        tape = Tape()
        x = tape.parameter([0.0, 1.0])
        grads = tape.backward(ops.sum(ops.activation(x, Activation.RELU)))
        np.testing.assert_array_equal(grads[x], [0.0, 1.0])

    def test_reductions(self):
        tape = Tape()
        assert ops.l1_distance(tape.constant([1.0, 2.0]), tape.constant([1.0, 5.0])).item() == 3.0
        assert ops.mean(tape.constant([1.0, 2.0, 3.0])).item() == 2.0
        assert ops.log(tape.constant(1.0)).item() == 0.0

    def test_log_domain(self):
        tape = Tape()
        with pytest.raises(DomainError):
            ops.log(tape.constant([1.0, 0.0]))

    def test_take_reshapes_slice(self):
        tape = Tape()
        flat = tape.parameter(np.arange(6.0))
        block = ops.take(flat, 2, 6, (2, 2))
        np.testing.assert_array_equal(block.value, [[2.0, 3.0], [4.0, 5.0]])
        grads = tape.backward(ops.sum(block))
        np.testing.assert_array_equal(grads[flat], [0, 0, 1, 1, 1, 1])

    def test_clip_blocks_gradient_outside(self):
        tape = Tape()
        x = tape.parameter([-2.0, 0.5, 3.0])
        y = ops.clip(x, -1.0, 1.0)
        np.testing.assert_array_equal(y.value, [-1.0, 0.5, 1.0])
        np.testing.assert_array_equal(tape.backward(ops.sum(y))[x], [0.0, 1.0, 0.0])


class TestBackward:
    def test_scale_gradient_is_constant(self):
        tape = Tape()
        theta = tape.parameter(3.0)
        grads = tape.backward(ops.mul(theta, 2.5))
        assert float(grads[theta]) == 2.5

    def test_root_is_parameter(self):
        tape = Tape()
        theta = tape.parameter(1.0)
        assert float(tape.backward(theta)[theta]) == 1.0

    def test_shared_subexpression_accumulates(self):
        tape = Tape()
        x = tape.parameter([1.5, -2.0])
        y = ops.sum(ops.mul(x, x))
        np.testing.assert_allclose(tape.backward(y)[x], [3.0, -4.0])

    def test_unrelated_parameter_has_zero_gradient(self):
        tape = Tape()
        x = tape.parameter([1.0, 2.0])
        other = tape.parameter(np.ones((2, 2)))
        grads = tape.backward(ops.sum(x))
        np.testing.assert_array_equal(grads[other], np.zeros((2, 2)))

    def test_non_scalar_root(self):
        tape = Tape()
        x = tape.parameter([1.0, 2.0])
        with pytest.raises(ContractError):
            tape.backward(x)

    def test_cross_tape_input(self):
        a, b = Tape(), Tape()
        with pytest.raises(ContractError):
            ops.add(a.parameter(1.0), b.parameter(1.0))


class TestClamp:
    def test_clamp_values(self):
        assert float(clamp_params(np.array(5.0), 0.01)) == 0.01
        np.testing.assert_array_equal(clamp_params(np.array([-3.0, 0.001]), 0.01), [-0.01, 0.001])

    def test_idempotent(self):
        x = np.random.default_rng(0).normal(size=20)
        once = clamp_params(x, 0.1)
        np.testing.assert_array_equal(clamp_params(once, 0.1), once)

    def test_tensor_in_tensor_out(self):
        out = clamp_params(Tensor([1.0, -1.0]), 0.5)
        assert isinstance(out, Tensor)
        np.testing.assert_array_equal(out.data, [0.5, -0.5])

    def test_positive_constant(self):
        with pytest.raises(ContractError):
            clamp_params(np.zeros(2), 0.0)


KINDS = [Activation.TANH, Activation.SIGMOID, Activation.LEAKY_RELU]


def _random_graph(x, w, b, kind, shift):
    """把每一种可微运算都串进一张以标量为根的图"""
    tape = Tape()
    xv, wv, bv = tape.parameter(x), tape.parameter(w), tape.parameter(b)
    h = ops.activation(ops.add_bias(ops.matmul(xv, wv), bv), kind)
    ht = ops.transpose(h)
    first = ops.column(h, 0)
    rows = ops.take(ops.column(ht, 1), 0, 2, (2,))
    wide = ops.clip(h, -10.0, 10.0)
    mixed = ops.sub(ops.mul(first, first), ops.neg(ops.mul(first, 0.5)))
    pos = ops.add(ops.square(wide), 1.0)
    terms = [
        ops.mean(ops.log(pos)),
        ops.sum(mixed),
        ops.l1_distance(rows, tape.constant(shift)),
        ops.mean(ops.square(ht)),
    ]
    root = terms[0]
    for t in terms[1:]:
        root = ops.add(root, t)
    return tape, (xv, wv, bv), root


class TestFiniteDifferences:
    @pytest.mark.parametrize("seed", range(100))
    def test_random_network(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(3, 4))
        w = rng.normal(size=(4, 2))
        b = rng.normal(size=2)
        shift = rng.normal(size=2) * 3.0
        kind = KINDS[seed % len(KINDS)]

        tape, leaves, root = _random_graph(x, w, b, kind, shift)
        grads = tape.backward(root)
        values = [x, w, b]
        for i, leaf in enumerate(leaves):

            def f(v, i=i):
                args = list(values)
                args[i] = v
                return _random_graph(*args, kind, shift)[2].item()

            assert rel_error(grads[leaf], fd_gradient(f, values[i])) < 1e-4
