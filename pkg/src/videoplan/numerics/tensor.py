"""Dense float32 tensors with reverse-mode autodiff on top of numpy.

Every op records its parents and a backward closure on the output tensor;
``backward`` on a scalar loss topologically replays those closures and
accumulates gradients into requires_grad leaves. Heavy lifting (matmul,
im2col convolutions) goes through BLAS; the graph itself is plain Python.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


class ShapeError(ValueError):
    """Raised when an op receives shape-incompatible inputs."""

    def __init__(self, op: str, *shapes):
        super().__init__(f"{op}: incompatible shapes {' vs '.join(str(tuple(s)) for s in shapes)}")


class NonFiniteError(FloatingPointError):
    """Raised when an op produces NaN or Inf."""


# Toggled off only for micro-benchmarks; every op checks its output by default.
FINITE_CHECKS = True


def _check_finite(op: str, arr: np.ndarray) -> None:
    if FINITE_CHECKS and not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{op} produced non-finite values")


class Tensor:
    """A dense n-d value with an optional gradient buffer.

    data is float32 unless the caller opts into another float dtype
    (float64 is used by the finite-difference test oracles).
    """

    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward", "_op")

    def __init__(self, data, requires_grad: bool = False, dtype=np.float32):
        arr = np.asarray(data, dtype=dtype)
        self.data = arr
        self.requires_grad = requires_grad
        self.grad = np.zeros_like(arr) if requires_grad else None
        self._parents: tuple = ()
        self._backward = None
        self._op = "leaf"

    # -- bookkeeping -----------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self) -> int:
        return self.data.size

    def zero_grad(self) -> None:
        if self.grad is not None:
            self.grad[...] = 0.0

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy(), dtype=self.data.dtype)

    def item(self) -> float:
        return float(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, op={self._op}, requires_grad={self.requires_grad})"

    # -- operator sugar ----------------------------------------------------

    def __add__(self, other):
        return add(self, _wrap(other, self.dtype))

    def __sub__(self, other):
        return sub(self, _wrap(other, self.dtype))

    def __mul__(self, other):
        return mul(self, _wrap(other, self.dtype))

    def __matmul__(self, other):
        return matmul(self, other)


def _wrap(value, dtype) -> "Tensor":
    return value if isinstance(value, Tensor) else Tensor(np.asarray(value, dtype=dtype), dtype=dtype)


def _make(op: str, data: np.ndarray, parents, backward) -> Tensor:
    _check_finite(op, data)
    out = Tensor.__new__(Tensor)
    out.data = data
    needs = any(p.requires_grad for p in parents)
    out.requires_grad = needs
    out.grad = np.zeros_like(data) if needs else None
    out._parents = tuple(parents) if needs else ()
    out._backward = backward if needs else None
    out._op = op
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Reduce grad back to shape after numpy broadcasting."""
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


# -- elementwise / linear ops -------------------------------------------------


def add(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data + b.data
    except ValueError:
        raise ShapeError("add", a.shape, b.shape)

    def backward(g):
        if a.requires_grad:
            a.grad += _unbroadcast(g, a.shape)
        if b.requires_grad:
            b.grad += _unbroadcast(g, b.shape)

    return _make("add", data, (a, b), backward)


def sub(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data - b.data
    except ValueError:
        raise ShapeError("sub", a.shape, b.shape)

    def backward(g):
        if a.requires_grad:
            a.grad += _unbroadcast(g, a.shape)
        if b.requires_grad:
            b.grad -= _unbroadcast(g, b.shape)

    return _make("sub", data, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    try:
        data = a.data * b.data
    except ValueError:
        raise ShapeError("mul", a.shape, b.shape)

    def backward(g):
        if a.requires_grad:
            a.grad += _unbroadcast(g * b.data, a.shape)
        if b.requires_grad:
            b.grad += _unbroadcast(g * a.data, b.shape)

    return _make("mul", data, (a, b), backward)


def scale(a: Tensor, s: float) -> Tensor:
    s = a.data.dtype.type(s)
    data = a.data * s

    def backward(g):
        if a.requires_grad:
            a.grad += g * s

    return _make("scale", data, (a,), backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError("matmul", a.shape, b.shape)
    data = a.data @ b.data

    def backward(g):
        if a.requires_grad:
            a.grad += g @ b.data.T
        if b.requires_grad:
            b.grad += a.data.T @ g

    return _make("matmul", data, (a, b), backward)


def silu(x: Tensor) -> Tensor:
    sig = 1.0 / (1.0 + np.exp(-x.data))
    data = x.data * sig

    def backward(g):
        if x.requires_grad:
            x.grad += g * (sig * (1.0 + x.data * (1.0 - sig)))

    return _make("silu", data, (x,), backward)


def sigmoid(x: Tensor) -> Tensor:
    data = 1.0 / (1.0 + np.exp(-x.data))

    def backward(g):
        if x.requires_grad:
            x.grad += g * (data * (1.0 - data))

    return _make("sigmoid", data, (x,), backward)


def reshape(x: Tensor, shape) -> Tensor:
    shape = tuple(shape)
    try:
        data = x.data.reshape(shape)
    except ValueError:
        raise ShapeError("reshape", x.shape, shape)

    def backward(g):
        if x.requires_grad:
            x.grad += g.reshape(x.shape)

    return _make("reshape", data, (x,), backward)


def transpose(x: Tensor, axes) -> Tensor:
    axes = tuple(axes)
    data = np.ascontiguousarray(x.data.transpose(axes))
    inverse = tuple(np.argsort(axes))

    def backward(g):
        if x.requires_grad:
            x.grad += g.transpose(inverse)

    return _make("transpose", data, (x,), backward)


def mean_axis(x: Tensor, axis: int) -> Tensor:
    data = x.data.mean(axis=axis)
    n = x.shape[axis]

    def backward(g):
        if x.requires_grad:
            x.grad += np.expand_dims(g, axis) / n

    return _make("mean_axis", data, (x,), backward)


def embedding(table: Tensor, ids: np.ndarray) -> Tensor:
    """table (V, D), integer ids (...,) -> (..., D)."""
    ids = np.asarray(ids)
    data = table.data[ids]

    def backward(g):
        if table.requires_grad:
            np.add.at(table.grad, ids, g)

    return _make("embedding", data, (table,), backward)


def concat_channels(tensors) -> Tensor:
    """Concatenate along the trailing (channel) axis."""
    tensors = list(tensors)
    lead = tensors[0].shape[:-1]
    for t in tensors[1:]:
        if t.shape[:-1] != lead:
            raise ShapeError("concat_channels", tensors[0].shape, t.shape)
    data = np.concatenate([t.data for t in tensors], axis=-1)
    sizes = [t.shape[-1] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad:
                t.grad += g[..., lo:hi]

    return _make("concat_channels", data, tensors, backward)


# -- convolutions -------------------------------------------------------------


def _im2col(x: np.ndarray) -> np.ndarray:
    """(B, H+2, W+2, C) padded input -> (B*H*W, 9*C) patch matrix."""
    b, hp, wp, c = x.shape
    cols = sliding_window_view(x, (3, 3), axis=(1, 2))  # B, H, W, C, 3, 3
    cols = cols.transpose(0, 1, 2, 4, 5, 3)  # B, H, W, 3, 3, C
    return cols.reshape(b * (hp - 2) * (wp - 2), 9 * c)


def _conv2d_raw(x: np.ndarray, w2d: np.ndarray) -> np.ndarray:
    """Same-padded 3x3 conv. x (B,H,W,Cin), w2d (9*Cin, Cout) -> (B,H,W,Cout)."""
    b, h, wdt, _ = x.shape
    xp = np.pad(x, ((0, 0), (1, 1), (1, 1), (0, 0)))
    cols = _im2col(xp)
    return (cols @ w2d).reshape(b, h, wdt, w2d.shape[1])


def conv2d(x: Tensor, w: Tensor, b: Tensor | None = None) -> Tensor:
    """3x3 same-padding convolution. x (B,H,W,Cin), w (3,3,Cin,Cout), b (Cout,)."""
    if x.data.ndim != 4 or w.shape[:2] != (3, 3) or x.shape[3] != w.shape[2]:
        raise ShapeError("conv2d", x.shape, w.shape)
    cin, cout = w.shape[2], w.shape[3]
    w2d = w.data.reshape(9 * cin, cout)
    bsz, h, wdt, _ = x.shape
    xp = np.pad(x.data, ((0, 0), (1, 1), (1, 1), (0, 0)))
    cols = _im2col(xp)
    data = cols @ w2d
    if b is not None:
        if b.shape != (cout,):
            raise ShapeError("conv2d bias", b.shape, (cout,))
        data += b.data
    data = data.reshape(bsz, h, wdt, cout)

    def backward(g):
        g2d = g.reshape(-1, cout)
        if w.requires_grad:
            w.grad += (cols.T @ g2d).reshape(3, 3, cin, cout)
        if b is not None and b.requires_grad:
            b.grad += g2d.sum(axis=0)
        if x.requires_grad:
            # Gradient wrt input of a stride-1 same conv is a same conv with
            # the kernel flipped spatially and in/out channels swapped.
            wflip = w.data[::-1, ::-1].transpose(0, 1, 3, 2).reshape(9 * cout, cin)
            x.grad += _conv2d_raw(g, wflip)

    return _make("conv2d", data, (x, w) if b is None else (x, w, b), backward)


def temporal_conv1d(x: Tensor, w: Tensor, b: Tensor | None = None) -> Tensor:
    """Width-3 same-padding conv over the middle axis. x (B,T,Cin), w (3,Cin,Cout)."""
    if x.data.ndim != 3 or w.shape[0] != 3 or x.shape[2] != w.shape[1]:
        raise ShapeError("temporal_conv1d", x.shape, w.shape)
    cin, cout = w.shape[1], w.shape[2]
    w2d = w.data.reshape(3 * cin, cout)
    bsz, t, _ = x.shape

    def fwd(inp, weight2d, co):
        xp = np.pad(inp, ((0, 0), (1, 1), (0, 0)))
        cols = sliding_window_view(xp, 3, axis=1)  # B, T, C, 3
        cols = cols.transpose(0, 1, 3, 2).reshape(bsz * t, 3 * inp.shape[2])
        return cols, (cols @ weight2d).reshape(bsz, t, co)

    cols, data = fwd(x.data, w2d, cout)
    if b is not None:
        data = data + b.data

    def backward(g):
        g2d = g.reshape(-1, cout)
        if w.requires_grad:
            w.grad += (cols.T @ g2d).reshape(3, cin, cout)
        if b is not None and b.requires_grad:
            b.grad += g2d.sum(axis=0)
        if x.requires_grad:
            wflip = w.data[::-1].transpose(0, 2, 1).reshape(3 * cout, cin)
            _, gx = fwd(g, wflip, cin)
            x.grad += gx

    return _make("temporal_conv1d", data, (x, w) if b is None else (x, w, b), backward)


def avg_pool2(x: Tensor) -> Tensor:
    """2x2 average pooling. x (B,H,W,C) with even H, W."""
    bsz, h, w, c = x.shape
    if h % 2 or w % 2:
        raise ShapeError("avg_pool2", x.shape)
    data = x.data.reshape(bsz, h // 2, 2, w // 2, 2, c).mean(axis=(2, 4))

    def backward(g):
        if x.requires_grad:
            gx = np.broadcast_to(g[:, :, None, :, None, :] * 0.25, (bsz, h // 2, 2, w // 2, 2, c))
            x.grad += gx.reshape(bsz, h, w, c)

    return _make("avg_pool2", data, (x,), backward)


def upsample_nearest2(x: Tensor) -> Tensor:
    """Nearest-neighbor 2x spatial upsampling. x (B,H,W,C)."""
    bsz, h, w, c = x.shape
    data = np.broadcast_to(
        x.data[:, :, None, :, None, :], (bsz, h, 2, w, 2, c)
    ).reshape(bsz, 2 * h, 2 * w, c).copy()

    def backward(g):
        if x.requires_grad:
            x.grad += g.reshape(bsz, h, 2, w, 2, c).sum(axis=(2, 4))

    return _make("upsample_nearest2", data, (x,), backward)


def mean_pool_spatial(x: Tensor) -> Tensor:
    """Mean over all pixel locations. x (B,H,W,C) -> (B,C)."""
    if x.data.ndim != 4:
        raise ShapeError("mean_pool_spatial", x.shape)
    bsz, h, w, c = x.shape
    data = x.data.mean(axis=(1, 2))
    inv = 1.0 / (h * w)

    def backward(g):
        if x.requires_grad:
            x.grad += np.broadcast_to(g[:, None, None, :] * inv, x.shape)

    return _make("mean_pool_spatial", data, (x,), backward)


# -- normalization ------------------------------------------------------------


def group_norm(x: Tensor, gamma: Tensor, beta: Tensor, groups: int = 4, eps: float = 1e-5) -> Tensor:
    """Group normalization over (spatial..., channels/groups) per sample.

    x (B, ..., C); gamma, beta (C,). Statistics are computed per (sample, group).
    """
    c = x.shape[-1]
    if c % groups or gamma.shape != (c,) or beta.shape != (c,):
        raise ShapeError("group_norm", x.shape, gamma.shape)
    bsz = x.shape[0]
    mid = int(np.prod(x.shape[1:-1], dtype=np.int64)) if x.data.ndim > 2 else 1
    cg = c // groups
    xg = x.data.reshape(bsz, mid, groups, cg)
    mean = xg.mean(axis=(1, 3), keepdims=True)
    var = xg.var(axis=(1, 3), keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (xg - mean) * inv_std
    data = (xhat.reshape(x.shape) * gamma.data) + beta.data

    def backward(g):
        gr = g.reshape(bsz, mid, groups, cg)
        if gamma.requires_grad:
            gamma.grad += (g * xhat.reshape(x.shape)).reshape(-1, c).sum(axis=0)
        if beta.requires_grad:
            beta.grad += g.reshape(-1, c).sum(axis=0)
        if x.requires_grad:
            dxhat = gr * gamma.data.reshape(1, 1, groups, cg)
            m1 = dxhat.mean(axis=(1, 3), keepdims=True)
            m2 = (dxhat * xhat).mean(axis=(1, 3), keepdims=True)
            dx = inv_std * (dxhat - m1 - xhat * m2)
            x.grad += dx.reshape(x.shape)

    return _make("group_norm", data, (x, gamma, beta), backward)


# -- losses -------------------------------------------------------------------


def mse_loss(pred: Tensor, target: Tensor) -> Tensor:
    if pred.shape != target.shape:
        raise ShapeError("mse_loss", pred.shape, target.shape)
    diff = pred.data - target.data
    data = np.asarray((diff * diff).mean(), dtype=pred.data.dtype)
    coeff = 2.0 / diff.size

    def backward(g):
        if pred.requires_grad:
            pred.grad += (coeff * g) * diff
        if target.requires_grad:
            target.grad -= (coeff * g) * diff

    return _make("mse_loss", data, (pred, target), backward)


def bce_with_logits(logits: Tensor, targets: Tensor) -> Tensor:
    """Mean binary cross-entropy on raw logits (numerically stable)."""
    if logits.shape != targets.shape:
        raise ShapeError("bce_with_logits", logits.shape, targets.shape)
    z, t = logits.data, targets.data
    data = np.asarray((np.maximum(z, 0) - z * t + np.log1p(np.exp(-np.abs(z)))).mean(),
                      dtype=z.dtype)
    sig = 1.0 / (1.0 + np.exp(-z))
    coeff = 1.0 / z.size

    def backward(g):
        if logits.requires_grad:
            logits.grad += (coeff * g) * (sig - t)

    return _make("bce_with_logits", data, (logits, targets), backward)


# -- reverse-mode driver ------------------------------------------------------


def backward(loss: Tensor) -> None:
    """Populate grads of all requires_grad leaves reachable from a scalar loss."""
    if loss.data.size != 1:
        raise ShapeError("backward: loss must be scalar, got", loss.shape)
    if not loss.requires_grad:
        return

    topo: list[Tensor] = []
    visited: set[int] = set()
    stack = [(loss, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            topo.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p.requires_grad and id(p) not in visited:
                stack.append((p, False))

    loss.grad = np.ones_like(loss.data)
    for node in reversed(topo):
        if node._backward is not None:
            node._backward(node.grad)


def linear(x: Tensor, w: Tensor, b: Tensor | None = None) -> Tensor:
    """x (B, in) @ w (in, out) + b."""
    out = matmul(x, w)
    return out if b is None else add(out, b)
