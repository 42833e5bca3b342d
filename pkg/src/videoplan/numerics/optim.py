"""Adam with global-norm gradient clipping and linear learning-rate warmup."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tensor import Tensor


@dataclass
class AdamState:
    """Optimizer state. Moment buffers are keyed like the parameter dict."""

    step_count: int = 0
    first_moment: dict = field(default_factory=dict)
    second_moment: dict = field(default_factory=dict)
    base_lr: float = 1e-4
    warmup_steps: int = 1000
    clip_norm: float = 1.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def effective_lr(self) -> float:
        return self.base_lr * min(1.0, self.step_count / self.warmup_steps)


def global_grad_norm(grads: dict[str, np.ndarray]) -> float:
    total = 0.0
    for g in grads.values():
        total += float(np.dot(g.ravel(), g.ravel()))
    return math.sqrt(total)


def clip_grads(grads: dict[str, np.ndarray], clip_norm: float) -> float:
    """Scale grads in place so the global norm is at most clip_norm. Returns the pre-clip norm."""
    norm = global_grad_norm(grads)
    if clip_norm > 0 and norm > clip_norm:
        factor = clip_norm / norm
        for g in grads.values():
            g *= factor
    return norm


def adam_step(params: dict[str, Tensor], grads: dict[str, np.ndarray], state: AdamState) -> float:
    """One clipped, warmup-scaled Adam update. Mutates params and state; returns pre-clip grad norm."""
    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(f"adam_step: non-finite gradient for parameter '{name}'")
        if g.shape != params[name].shape:
            raise ValueError(f"adam_step: grad shape {g.shape} != param shape {params[name].shape} for '{name}'")

    norm = clip_grads(grads, state.clip_norm)
    state.step_count += 1
    lr = state.effective_lr()
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1 ** state.step_count
    bc2 = 1.0 - b2 ** state.step_count

    for name, p in params.items():
        g = grads[name]
        m = state.first_moment.get(name)
        if m is None:
            m = state.first_moment[name] = np.zeros_like(p.data)
        v = state.second_moment.get(name)
        if v is None:
            v = state.second_moment[name] = np.zeros_like(p.data)
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        update = (lr / bc1) * m / (np.sqrt(v / bc2) + state.eps)
        p.data -= update.astype(p.data.dtype)
    return norm


def collect_grads(params: dict[str, Tensor]) -> dict[str, np.ndarray]:
    """Copy out grads after backward(); callers then zero the originals."""
    return {name: p.grad.copy() for name, p in params.items()}


def zero_grads(params: dict[str, Tensor]) -> None:
    for p in params.values():
        p.zero_grad()
