"""闭合连通的二维区域: 圆盘 / 环扇形 / 矩形"""

import math
from dataclasses import dataclass

import numpy as np

from ..common.cons import ComponentKind
from ..common.exceptions import ContractError
from ..common.settings import MEMBERSHIP_ATOL
from .geometry import TWO_PI, Arc, Piece, Segment, angle_in_range, piece_distance, point_segment_distances


@dataclass(frozen=True)
class ComponentSpec:
    """
    一个数据分量 X_k

    - disk: center, radius
    - annulus_arc: center, inner_radius, outer_radius, angle_start, angle_span (弧度, 逆时针)
    - box: center, half_widths
    """

    kind: ComponentKind
    center: tuple[float, float]
    radius: float = 0.0
    inner_radius: float = 0.0
    outer_radius: float = 0.0
    angle_start: float = 0.0
    angle_span: float = TWO_PI
    half_widths: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "kind", ComponentKind(self.kind))
        center = tuple(float(v) for v in self.center)
        if len(center) != 2 or not all(math.isfinite(v) for v in center):
            raise ContractError(f"center must be a finite 2-vector, got {self.center}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_widths", tuple(float(v) for v in self.half_widths))

        if self.kind is ComponentKind.DISK:
            if not self.radius > 0:
                raise ContractError(f"disk radius must be positive, got {self.radius}")
        elif self.kind is ComponentKind.ANNULUS_ARC:
            if not 0 <= self.inner_radius < self.outer_radius:
                raise ContractError(
                    f"annulus needs 0 <= inner < outer radius, got {self.inner_radius}, {self.outer_radius}"
                )
            if not 0 < self.angle_span <= TWO_PI:
                raise ContractError(f"angle span must be in (0, 2pi], got {self.angle_span}")
        else:
            if len(self.half_widths) != 2 or min(self.half_widths) <= 0:
                raise ContractError(f"box half widths must be positive, got {self.half_widths}")

    # ---------- 构造 ----------

    @classmethod
    def disk(cls, center, radius: float) -> "ComponentSpec":
        return cls(ComponentKind.DISK, tuple(center), radius=radius)

    @classmethod
    def annulus_arc(cls, center, inner_radius: float, outer_radius: float, angle_start=0.0, angle_span=TWO_PI):
        return cls(
            ComponentKind.ANNULUS_ARC,
            tuple(center),
            inner_radius=inner_radius,
            outer_radius=outer_radius,
            angle_start=angle_start,
            angle_span=angle_span,
        )

    @classmethod
    def box(cls, center, half_widths) -> "ComponentSpec":
        return cls(ComponentKind.BOX, tuple(center), half_widths=tuple(half_widths))

    # ---------- 几何 ----------

    def params(self) -> dict[str, float | tuple]:
        """与 kind 相关的几何参数 (写入元数据)"""
        if self.kind is ComponentKind.DISK:
            return {"radius": self.radius}
        if self.kind is ComponentKind.ANNULUS_ARC:
            return {
                "inner_radius": self.inner_radius,
                "outer_radius": self.outer_radius,
                "angle_start": self.angle_start,
                "angle_span": self.angle_span,
            }
        return {"half_widths": self.half_widths}

    def interior_point(self) -> np.ndarray:
        c = np.asarray(self.center)
        if self.kind is ComponentKind.ANNULUS_ARC:
            r = 0.5 * (self.inner_radius + self.outer_radius)
            angle = self.angle_start + 0.5 * self.angle_span
            return c + r * np.array([math.cos(angle), math.sin(angle)])
        return c

    def boundary(self) -> list[Piece]:
        cx, cy = self.center
        if self.kind is ComponentKind.DISK:
            return [Arc(self.center, self.radius, 0.0, TWO_PI)]
        if self.kind is ComponentKind.BOX:
            hx, hy = self.half_widths
            corners = [(cx - hx, cy - hy), (cx + hx, cy - hy), (cx + hx, cy + hy), (cx - hx, cy + hy)]
            return [Segment(corners[i], corners[(i + 1) % 4]) for i in range(4)]

        pieces: list[Piece] = [Arc(self.center, self.outer_radius, self.angle_start, self.angle_span)]
        if self.inner_radius > 0:
            pieces.append(Arc(self.center, self.inner_radius, self.angle_start, self.angle_span))
        if self.angle_span < TWO_PI:
            for angle in (self.angle_start, self.angle_start + self.angle_span):
                u = (math.cos(angle), math.sin(angle))
                pieces.append(
                    Segment(
                        (cx + self.inner_radius * u[0], cy + self.inner_radius * u[1]),
                        (cx + self.outer_radius * u[0], cy + self.outer_radius * u[1]),
                    )
                )
        return pieces

    def distances(self, points) -> np.ndarray:
        """points [N×2] 到闭区域的欧氏距离, 区域内为 0"""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        c = np.asarray(self.center)
        v = pts - c

        if self.kind is ComponentKind.DISK:
            return np.maximum(np.linalg.norm(v, axis=1) - self.radius, 0.0)
        if self.kind is ComponentKind.BOX:
            excess = np.maximum(np.abs(v) - np.asarray(self.half_widths), 0.0)
            return np.linalg.norm(excess, axis=1)

        rho = np.linalg.norm(v, axis=1)
        radial = np.maximum(np.maximum(self.inner_radius - rho, rho - self.outer_radius), 0.0)
        if self.angle_span >= TWO_PI:
            return radial
        phi = np.arctan2(v[:, 1], v[:, 0])
        inside = angle_in_range(phi, self.angle_start, self.angle_span)
        # 角度范围外的最近点在两条径向边上
        edges = [p for p in self.boundary() if isinstance(p, Segment)]
        outside = np.minimum(
            point_segment_distances(pts, edges[0].a, edges[0].b),
            point_segment_distances(pts, edges[1].a, edges[1].b),
        )
        return np.where(inside, radial, outside)

    def distance(self, x) -> float:
        return float(self.distances(np.asarray(x, dtype=np.float64).reshape(1, 2))[0])

    def contains(self, points, atol: float = MEMBERSHIP_ATOL) -> np.ndarray:
        return self.distances(points) <= atol

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """区域内均匀采样 [n×2]"""
        c = np.asarray(self.center)
        if self.kind is ComponentKind.BOX:
            h = np.asarray(self.half_widths)
            return c + rng.uniform(-1.0, 1.0, size=(n, 2)) * h

        if self.kind is ComponentKind.DISK:
            r = self.radius * np.sqrt(rng.uniform(size=n))
            theta = rng.uniform(0.0, TWO_PI, size=n)
        else:
            ri, ro = self.inner_radius, self.outer_radius
            r = np.sqrt(rng.uniform(size=n) * (ro**2 - ri**2) + ri**2)
            theta = self.angle_start + rng.uniform(size=n) * self.angle_span
        return c + np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def component_distance(a: ComponentSpec, b: ComponentSpec) -> float:
    """两个闭区域的最小距离; 相交 (含包含) 时为 0"""
    if a.distance(b.interior_point()) == 0 or b.distance(a.interior_point()) == 0:
        return 0.0
    return min(piece_distance(p, q) for p in a.boundary() for q in b.boundary())
