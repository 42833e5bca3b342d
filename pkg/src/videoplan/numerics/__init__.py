"""Minimal dense-tensor engine: autodiff ops, Adam, and checkpoint I/O."""

from .tensor import (
    FINITE_CHECKS,
    NonFiniteError,
    ShapeError,
    Tensor,
    add,
    avg_pool2,
    backward,
    bce_with_logits,
    concat_channels,
    conv2d,
    embedding,
    group_norm,
    linear,
    matmul,
    mean_axis,
    mean_pool_spatial,
    mse_loss,
    mul,
    reshape,
    scale,
    sigmoid,
    silu,
    sub,
    temporal_conv1d,
    transpose,
    upsample_nearest2,
)
from .optim import AdamState, adam_step, clip_grads, collect_grads, global_grad_norm, zero_grads
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    "FINITE_CHECKS",
    "NonFiniteError",
    "ShapeError",
    "Tensor",
    "add",
    "avg_pool2",
    "backward",
    "bce_with_logits",
    "concat_channels",
    "conv2d",
    "embedding",
    "group_norm",
    "linear",
    "matmul",
    "mean_axis",
    "mean_pool_spatial",
    "mse_loss",
    "mul",
    "reshape",
    "scale",
    "sigmoid",
    "silu",
    "sub",
    "temporal_conv1d",
    "transpose",
    "upsample_nearest2",
    "AdamState",
    "adam_step",
    "clip_grads",
    "collect_grads",
    "global_grad_norm",
    "zero_grads",
    "CheckpointError",
    "load_checkpoint",
    "save_checkpoint",
]
