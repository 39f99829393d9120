"""
边界图元与闭式距离

区域边界由线段 (Segment) 与圆弧 (Arc) 拼成, 两个区域的距离取边界图元两两距离的最小值,
再用各自的内部代表点排除包含关系。所有距离都是候选点集合上的闭式最小值:
端点、垂足、圆心连线与交点。
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Segment:
    a: tuple[float, float]
    b: tuple[float, float]


@dataclass(frozen=True)
class Arc:
    """圆心 center, 半径 radius, 从 start 逆时针扫过 span 弧度 (span = 2pi 为整圆)"""

    center: tuple[float, float]
    radius: float
    start: float
    span: float

    @property
    def is_circle(self) -> bool:
        return self.span >= TWO_PI

    def point_at(self, angle: float) -> np.ndarray:
        c = np.asarray(self.center)
        return c + self.radius * np.array([math.cos(angle), math.sin(angle)])

    def endpoints(self) -> list[np.ndarray]:
        if self.is_circle:
            return []
        return [self.point_at(self.start), self.point_at(self.start + self.span)]

    def covers(self, angle: float, tol: float = 1e-12) -> bool:
        if self.is_circle:
            return True
        return angle_in_range(angle, self.start, self.span, tol)


Piece = Union[Segment, Arc]


def angle_in_range(angle, start: float, span: float, tol: float = 1e-12):
    """angle 是否落在 [start, start + span] (逆时针), 支持数组"""
    offset = np.mod(np.asarray(angle) - start, TWO_PI)
    inside = offset <= span + tol
    # 恰好绕回 start 的数值误差
    return inside | (offset >= TWO_PI - tol)


# ==================== 点到图元 ====================


def point_segment_distance(p, seg: Segment) -> float:
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(seg.a, dtype=np.float64)
    b = np.asarray(seg.b, dtype=np.float64)
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def point_segment_distances(points: np.ndarray, a, b) -> np.ndarray:
    """批量版本: points [N×2] 到线段 ab 的距离"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0:
        return np.linalg.norm(points - a, axis=1)
    t = np.clip((points - a) @ ab / denom, 0.0, 1.0)
    return np.linalg.norm(points - (a + t[:, None] * ab), axis=1)


def point_arc_distance(p, arc: Arc) -> float:
    p = np.asarray(p, dtype=np.float64)
    c = np.asarray(arc.center, dtype=np.float64)
    v = p - c
    rho = float(np.linalg.norm(v))
    if rho == 0:
        return arc.radius
    if arc.covers(math.atan2(v[1], v[0])):
        return abs(rho - arc.radius)
    return min(float(np.linalg.norm(p - e)) for e in arc.endpoints())


def point_piece_distance(p, piece: Piece) -> float:
    if isinstance(piece, Segment):
        return point_segment_distance(p, piece)
    return point_arc_distance(p, piece)


# ==================== 图元到图元 ====================


def _cross(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    p, r = np.asarray(s1.a, float), np.asarray(s1.b, float) - np.asarray(s1.a, float)
    q, s = np.asarray(s2.a, float), np.asarray(s2.b, float) - np.asarray(s2.a, float)
    rxs = _cross(r, s)
    qp = q - p
    if rxs == 0:
        if _cross(qp, r) != 0:
            return False
        # 共线: 看投影区间是否重叠
        rr = float(r @ r)
        if rr == 0:
            return point_segment_distance(p, s2) == 0
        t0 = float(qp @ r) / rr
        t1 = t0 + float(s @ r) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        return hi >= 0 and lo <= 1
    t = _cross(qp, s) / rxs
    u = _cross(qp, r) / rxs
    return 0 <= t <= 1 and 0 <= u <= 1


def segment_segment_distance(s1: Segment, s2: Segment) -> float:
    if segments_intersect(s1, s2):
        return 0.0
    return min(
        point_segment_distance(s1.a, s2),
        point_segment_distance(s1.b, s2),
        point_segment_distance(s2.a, s1),
        point_segment_distance(s2.b, s1),
    )


def segment_arc_distance(seg: Segment, arc: Arc) -> float:
    a = np.asarray(seg.a, dtype=np.float64)
    b = np.asarray(seg.b, dtype=np.float64)
    c = np.asarray(arc.center, dtype=np.float64)
    d = b - a
    candidates = [point_arc_distance(a, arc), point_arc_distance(b, arc)]
    candidates += [point_segment_distance(e, seg) for e in arc.endpoints()]

    dd = float(d @ d)
    if dd > 0:
        # 线段上离圆心最近的点 (垂足)
        t = float(np.clip((c - a) @ d / dd, 0.0, 1.0))
        candidates.append(point_arc_distance(a + t * d, arc))

        # 与圆的交点
        f = a - c
        B = 2.0 * float(f @ d)
        C = float(f @ f) - arc.radius**2
        disc = B * B - 4.0 * dd * C
        if disc >= 0:
            root = math.sqrt(disc)
            for t in ((-B - root) / (2.0 * dd), (-B + root) / (2.0 * dd)):
                if 0 <= t <= 1:
                    x = a + t * d - c
                    if arc.covers(math.atan2(x[1], x[0])):
                        return 0.0
    return min(candidates)


def arc_arc_distance(a1: Arc, a2: Arc) -> float:
    c1 = np.asarray(a1.center, dtype=np.float64)
    c2 = np.asarray(a2.center, dtype=np.float64)
    candidates = [point_arc_distance(e, a2) for e in a1.endpoints()]
    candidates += [point_arc_distance(e, a1) for e in a2.endpoints()]

    v = c2 - c1
    dist = float(np.linalg.norm(v))
    if dist == 0:
        # 同心: 角度范围有重叠时距离为半径差
        gap = abs(a1.radius - a2.radius)
        if a1.is_circle or a2.is_circle or a1.covers(a2.start) or a2.covers(a1.start):
            candidates.append(gap)
        return min(candidates) if candidates else gap

    u = v / dist
    # 圆心连线上的点
    base = math.atan2(u[1], u[0])
    for angle in (base, base + math.pi):
        if a1.covers(angle):
            candidates.append(point_arc_distance(a1.point_at(angle), a2))
        if a2.covers(angle):
            candidates.append(point_arc_distance(a2.point_at(angle), a1))

    # 两圆交点
    r1, r2 = a1.radius, a2.radius
    if abs(r1 - r2) <= dist <= r1 + r2:
        along = (dist**2 + r1**2 - r2**2) / (2.0 * dist)
        h = math.sqrt(max(r1**2 - along**2, 0.0))
        mid = c1 + along * u
        perp = np.array([-u[1], u[0]])
        for x in (mid + h * perp, mid - h * perp):
            w1, w2 = x - c1, x - c2
            if a1.covers(math.atan2(w1[1], w1[0])) and a2.covers(math.atan2(w2[1], w2[0])):
                return 0.0
    return min(candidates)


def piece_distance(p1: Piece, p2: Piece) -> float:
    if isinstance(p1, Segment) and isinstance(p2, Segment):
        return segment_segment_distance(p1, p2)
    if isinstance(p1, Segment):
        return segment_arc_distance(p1, p2)
    if isinstance(p2, Segment):
        return segment_arc_distance(p2, p1)
    return arc_arc_distance(p1, p2)
