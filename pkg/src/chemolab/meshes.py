"""Discrete geometry and conservative flux-form operators.

Two mesh flavors cover the supported domains:

* ``CartesianMesh2D`` -- an Lx x Ly rectangle split into nx x ny uniform
  cells.  Cells are ordered row-major with x fastest: cell (ix, iy) lives at
  flat index iy*nx + ix.
* ``RadialShellMesh`` -- a ball of radius R in n_dim dimensions under radial
  symmetry, split into m uniform shells indexed from the center outward.
  Face "areas" are r^(n-1) and shell volumes (r_out^n - r_in^n)/n; the
  constant surface measure of the unit sphere is omitted consistently, so
  the total volume is R^n / n.

Fields are plain 1-D ``numpy`` arrays with one entry per cell in the mesh's
ordering.  Both operators below are two-point flux schemes with zero flux
through boundary faces, so volume-weighted sums of their output vanish to
rounding: ``laplacian`` uses centered face gradients, the chemotactic
divergence uses donor-cell upwinding with the face chemical value taken as
the arithmetic mean of the two neighbors (v is bounded away from zero, so
the mean keeps the stencil linear without positivity risk).

The innermost radial face has zero area, which enforces the symmetry
condition at r = 0 without ghost values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PositivityViolation


class CartesianMesh2D:
    """Uniform rectangle mesh; cell (ix, iy) -> flat index iy*nx + ix."""

    geometry = "cartesian2d"

    def __init__(self, lx: float, ly: float, nx: int, ny: int):
        if not (lx > 0.0 and ly > 0.0):
            raise DomainError(f"side lengths must be positive, got ({lx}, {ly})")
        if nx < 4 or ny < 4 or int(nx) != nx or int(ny) != ny:
            raise DomainError(f"need at least 4x4 integer cells, got ({nx}, {ny})")
        self.lx = float(lx)
        self.ly = float(ly)
        self.nx = int(nx)
        self.ny = int(ny)
        self.hx = self.lx / self.nx
        self.hy = self.ly / self.ny
        self.cell_count = self.nx * self.ny
        self.volumes = np.full(self.cell_count, self.hx * self.hy)
        self.domain_volume = float(self.volumes.sum())

    def cell_centers(self):
        """(x, y) coordinates per cell, each a flat array in cell order."""
        xs = (np.arange(self.nx) + 0.5) * self.hx
        ys = (np.arange(self.ny) + 0.5) * self.hy
        x, y = np.meshgrid(xs, ys)
        return x.ravel(), y.ravel()

    def integrate(self, f: np.ndarray) -> float:
        return float(self.volumes @ f)

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        g = f.reshape(self.ny, self.nx)
        out = np.zeros_like(g)
        tx = (g[:, 1:] - g[:, :-1]) / (self.hx * self.hx)
        out[:, :-1] += tx
        out[:, 1:] -= tx
        ty = (g[1:, :] - g[:-1, :]) / (self.hy * self.hy)
        out[:-1, :] += ty
        out[1:, :] -= ty
        return out.ravel()

    def _face_velocities(self, v: np.ndarray, chi: float):
        """Chemotactic face velocity chi * dv / (h * v_face) per direction."""
        g = v.reshape(self.ny, self.nx)
        wx = chi * (g[:, 1:] - g[:, :-1]) / (self.hx * 0.5 * (g[:, 1:] + g[:, :-1]))
        wy = chi * (g[1:, :] - g[:-1, :]) / (self.hy * 0.5 * (g[1:, :] + g[:-1, :]))
        return wx, wy

    def chemotactic_divergence(self, u: np.ndarray, v: np.ndarray, chi: float) -> np.ndarray:
        if not (v > 0.0).all():
            raise PositivityViolation("chemical field must be strictly positive")
        gu = u.reshape(self.ny, self.nx)
        wx, wy = self._face_velocities(v, chi)
        out = np.zeros_like(gu)
        fx = wx * np.where(wx > 0.0, gu[:, :-1], gu[:, 1:])
        out[:, :-1] += fx / self.hx
        out[:, 1:] -= fx / self.hx
        fy = wy * np.where(wy > 0.0, gu[:-1, :], gu[1:, :])
        out[:-1, :] += fy / self.hy
        out[1:, :] -= fy / self.hy
        return out.ravel()

    def diffusion_outflow_max(self) -> float:
        """max over cells of sum_faces area / (h * volume), unit diffusivity."""
        return 2.0 / (self.hx * self.hx) + 2.0 / (self.hy * self.hy)

    def advective_outflow_max(self, v: np.ndarray, chi: float) -> float:
        """max over cells of the donor-cell outflow rate sum_f A_f w_out,f / vol."""
        wx, wy = self._face_velocities(v, chi)
        acc = np.zeros((self.ny, self.nx))
        acc[:, :-1] += np.maximum(wx, 0.0) / self.hx
        acc[:, 1:] += np.maximum(-wx, 0.0) / self.hx
        acc[:-1, :] += np.maximum(wy, 0.0) / self.hy
        acc[1:, :] += np.maximum(-wy, 0.0) / self.hy
        return float(acc.max())


class RadialShellMesh:
    """Uniform shells of a radially symmetric n_dim-ball, indexed center-out."""

    geometry = "radial"

    def __init__(self, n_dim: int, radius: float, m: int):
        if int(n_dim) != n_dim or n_dim < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {n_dim}")
        if not radius > 0.0:
            raise DomainError(f"radius must be positive, got {radius}")
        if int(m) != m or m < 4:
            raise DomainError(f"need at least 4 integer shells, got {m}")
        self.n_dim = int(n_dim)
        self.radius = float(radius)
        self.m = int(m)
        self.h = self.radius / self.m
        self.cell_count = self.m
        self.face_r = np.linspace(0.0, self.radius, self.m + 1)
        self.face_area = self.face_r ** (self.n_dim - 1)
        self.volumes = (self.face_r[1:] ** self.n_dim - self.face_r[:-1] ** self.n_dim) / self.n_dim
        self.domain_volume = float(self.volumes.sum())
        self._inner_area = self.face_area[1:-1]  # interior faces 1..m-1

    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.m) + 0.5) * self.h

    def integrate(self, f: np.ndarray) -> float:
        return float(self.volumes @ f)

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        t = self._inner_area * (f[1:] - f[:-1]) / self.h
        out = np.zeros_like(f)
        out[:-1] += t / self.volumes[:-1]
        out[1:] -= t / self.volumes[1:]
        return out

    def _face_velocities(self, v: np.ndarray, chi: float) -> np.ndarray:
        return chi * (v[1:] - v[:-1]) / (self.h * 0.5 * (v[1:] + v[:-1]))

    def chemotactic_divergence(self, u: np.ndarray, v: np.ndarray, chi: float) -> np.ndarray:
        if not (v > 0.0).all():
            raise PositivityViolation("chemical field must be strictly positive")
        w = self._face_velocities(v, chi)
        flux = self._inner_area * w * np.where(w > 0.0, u[:-1], u[1:])
        out = np.zeros_like(u)
        out[:-1] += flux / self.volumes[:-1]
        out[1:] -= flux / self.volumes[1:]
        return out

    def diffusion_outflow_max(self) -> float:
        per_cell = (self.face_area[:-1] + self.face_area[1:]) / (self.h * self.volumes)
        return float(per_cell.max())

    def advective_outflow_max(self, v: np.ndarray, chi: float) -> float:
        w = self._face_velocities(v, chi)
        acc = np.zeros(self.m)
        acc[:-1] += self._inner_area * np.maximum(w, 0.0) / self.volumes[:-1]
        acc[1:] += self._inner_area * np.maximum(-w, 0.0) / self.volumes[1:]
        return float(acc.max())


Mesh = CartesianMesh2D | RadialShellMesh


@dataclass
class State:
    """Cell-averaged densities u >= 0, chemical v > 0, and the clock t.

    Construction does not validate (the solver hands back possibly diverged
    states for the caller to classify); call ``validate`` on data that must
    satisfy the invariants, e.g. initial conditions.
    """

    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def validate(self, mesh: Mesh | None = None) -> "State":
        if mesh is not None and (self.u.shape != (mesh.cell_count,) or self.v.shape != (mesh.cell_count,)):
            raise DomainError(
                f"fields must have one entry per cell ({mesh.cell_count}), "
                f"got {self.u.shape} and {self.v.shape}"
            )
        if not np.isfinite(self.u).all() or not np.isfinite(self.v).all():
            raise DomainError("fields must be finite")
        if (self.u < 0.0).any():
            raise PositivityViolation("cell density must be nonnegative")
        if (self.v <= 0.0).any():
            raise PositivityViolation("chemical field must be strictly positive")
        if not self.t >= 0.0:
            raise DomainError(f"time must be nonnegative, got {self.t}")
        return self

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.u).all() and np.isfinite(self.v).all())


def laplacian_neumann(f: np.ndarray, mesh: Mesh) -> np.ndarray:
    """Conservative two-point-flux Laplacian with zero-flux boundary faces."""
    return mesh.laplacian(f)


def chemotactic_divergence(u: np.ndarray, v: np.ndarray, chi: float, mesh: Mesh) -> np.ndarray:
    """Donor-cell upwind divergence of the taxis flux chi * u * grad(v) / v."""
    return mesh.chemotactic_divergence(u, v, chi)
