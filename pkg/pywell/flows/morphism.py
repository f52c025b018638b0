from dataclasses import dataclass

import numpy as np

from pywell.feature_library import torus_grid


@dataclass(frozen=True)
class MorphismReport:
    max_residual: float
    passed: bool
    grid_res: int


def check_morphism(phi, src, dst, grid_res=16, tol=1e-10):
    """
    Check ``d phi(X(y)) = X'(phi(y))`` on a uniform grid of the source torus.

    Parameters
    ----------
    phi : ChartMap
        Candidate morphism from ``src`` to ``dst``.

    src, dst : TorusFlow
        Source and target flows.

    grid_res : int, optional (default 16)
        Points per dimension of the verification grid.

    tol : float, optional (default 1e-10)
        Largest accepted residual.

    Returns
    -------
    report : MorphismReport
    """
    if phi.source_dim != src.dim:
        raise ValueError(
            "map source dimension {} != source flow dimension {}".format(
                phi.source_dim, src.dim
            )
        )
    if phi.target_dim != dst.dim:
        raise ValueError(
            "map target dimension {} != target flow dimension {}".format(
                phi.target_dim, dst.dim
            )
        )
    grid = torus_grid(src.dim, grid_res)
    pushed = np.einsum("gij,gj->gi", phi.jacobian(grid), src.eval_field(grid))
    residual = float(np.max(np.abs(pushed - dst.eval_field(phi(grid)))))
    return MorphismReport(
        max_residual=residual, passed=residual <= tol, grid_res=grid_res
    )
