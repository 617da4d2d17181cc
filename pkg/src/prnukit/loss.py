"""Loss kernels for trainers that estimate sensor noise rasters.

Two per-pair losses over a prediction ``z`` and a target raster:

* ``mse_loss``:  ||z - target||^2 / (2m), the usual pixel-closeness objective.
* ``rho_loss``:  1 - rho(z, k), which rewards *similarity up to positive
  affine transforms* instead of closeness; rho is the mean-centered,
  norm-normalized correlation, so the loss lives in [0, 2].

Both return the exact analytic gradient with respect to ``z``;
``rho_loss``'s gradient accounts for the mean-centering of ``z`` and the
target-norm factor.  ``rho_grad_uncentered`` evaluates a simplified closed
form that skips both and is kept only for comparison; see its docstring.
"""

from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputError, DimensionError


class LossEval(NamedTuple):
    loss: float
    grad: np.ndarray


def _pair(z, k):
    z = np.asarray(z, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    if z.shape != k.shape:
        raise DimensionError(f"shape mismatch {z.shape} vs {k.shape}")
    return z, k


def mse_loss(z, target):
    """Mean-squared-error loss ||z - target||^2 / (2m) and its gradient."""
    z, target = _pair(z, target)
    diff = z - target
    m = diff.size
    return LossEval(loss=float((diff * diff).sum() / (2 * m)), grad=diff / m)


def rho_loss(z, k):
    """Correlation loss 1 - rho(z, k) with the exact gradient in ``z``.

    Writing zc = z - mean(z) and kc = k - mean(k), the gradient is

        d/dz [1 - rho] = rho * zc / ||zc||^2  -  kc / (||zc|| ||kc||)

    (the centering Jacobian leaves both terms unchanged because zc and kc are
    already zero-mean).  It vanishes exactly on z = alpha*k + beta, alpha > 0,
    which are the global minima.
    """
    z, k = _pair(z, k)
    zc = z - z.mean()
    kc = k - k.mean()
    zn = np.sqrt((zc * zc).sum())
    kn = np.sqrt((kc * kc).sum())
    if zn == 0.0:
        raise DegenerateInputError("constant prediction: correlation undefined")
    if kn == 0.0:
        raise DegenerateInputError("constant target: correlation undefined")
    rho = float((zc * kc).sum() / (zn * kn))
    grad = rho * zc / (zn * zn) - kc / (zn * kn)
    return LossEval(loss=1.0 - rho, grad=grad)


def rho_grad_uncentered(z, k):
    """Simplified correlation-loss gradient kept for fidelity comparison.

    Evaluates ``(((z - mean z) . (k - mean k)) * z - ||z - mean z||^2 * k)
    / ||z - mean z||^3`` exactly as written: the outer ``z`` and ``k`` stay
    uncentered and the ``||k - mean k||`` normalizer is absent.  It agrees
    with :func:`rho_loss`'s gradient when both rasters are zero-mean and the
    target has unit norm, and deviates otherwise; derived checks always use
    the exact gradient.
    """
    z, k = _pair(z, k)
    zc = z - z.mean()
    kc = k - k.mean()
    zn = np.sqrt((zc * zc).sum())
    if zn == 0.0:
        raise DegenerateInputError("constant prediction: correlation undefined")
    if kc.std() == 0.0:
        raise DegenerateInputError("constant target: correlation undefined")
    inner = (zc * kc).sum()
    return (inner * z - (zn * zn) * k) / zn ** 3
