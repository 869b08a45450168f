//! Hyperbolic plane primitives in the hyperboloid model.
//!
//! Points live on the upper sheet of `x² + y² − z² = −1`. Isometries are
//! 3×3 matrices preserving the Minkowski form `diag(1, 1, −1)`. The Poincaré
//! disk is only used as an output projection.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Residual tolerance for the hyperboloid and isometry invariants.
pub const EPS_HYP: f64 = 1e-9;

/// Parameter tolerance of the golden-section search in [`point_segment_distance`].
const SEARCH_TOL: f64 = 1e-10;

/// A point of the hyperbolic plane in hyperboloid coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypPoint {
    x: f64,
    y: f64,
    z: f64,
}

impl HypPoint {
    /// The origin `(0, 0, 1)`.
    pub const ORIGIN: HypPoint = HypPoint { x: 0.0, y: 0.0, z: 1.0 };

    /// Projects `(x, y, z)` back onto the hyperboloid by scaling.
    ///
    /// Used after every linear map to stop round-off drift.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let q = z * z - x * x - y * y;
        if q.is_nan() || q <= 0.0 || z.is_nan() || z <= 0.0 || !q.is_finite() {
            return Err(Error::OffHyperboloid { x, y, z });
        }
        let s = q.sqrt();
        Ok(HypPoint { x: x / s, y: y / s, z: z / s })
    }

    /// Accepts raw coordinates that already sit on the hyperboloid.
    ///
    /// The residual is checked relative to `z²` so that far-out points read
    /// back from rounded text still pass; coordinates are kept verbatim.
    pub fn from_coords(x: f64, y: f64, z: f64) -> Result<Self> {
        let residual = x * x + y * y - z * z + 1.0;
        if !(x.is_finite() && y.is_finite() && z.is_finite()) || z < 1.0 - 1e-6 || residual.abs() > 1e-6 * z * z {
            return Err(Error::OffHyperboloid { x, y, z });
        }
        Ok(HypPoint { x, y, z })
    }

    /// The point at hyperbolic distance `r` from the origin in direction `theta`.
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let s = r.sinh();
        HypPoint { x: s * theta.cos(), y: s * theta.sin(), z: r.cosh() }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// `x² + y² − z² + 1`, zero for an exact point.
    pub fn residual(&self) -> f64 {
        self.x * self.x + self.y * self.y - self.z * self.z + 1.0
    }

    /// Polar angle of the point seen from the origin.
    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Minkowski inner product `a.x·b.x + a.y·b.y − a.z·b.z`.
pub fn minkowski(a: &HypPoint, b: &HypPoint) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// Hyperbolic distance.
///
/// Equal to `acosh(−⟨a,b⟩)`; evaluated through the Minkowski norm of `a − b`
/// (`cosh d − 1 = ‖a − b‖²/2`), which keeps precision for nearby points.
pub fn dist(a: &HypPoint, b: &HypPoint) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    let q = (dx * dx + dy * dy - dz * dz).max(0.0);
    2.0 * (q.sqrt() / 2.0).asinh()
}

/// Area of a disk of radius `r`: `2π(cosh r − 1)`.
pub fn disk_area(r: f64) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeRadius(r));
    }
    // 2π(cosh r − 1), written to avoid cancellation at small r.
    let h = (r / 2.0).sinh();
    Ok(4.0 * PI * h * h)
}

/// Perimeter of a disk of radius `r`: `2π sinh r`.
pub fn disk_perimeter(r: f64) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeRadius(r));
    }
    Ok(2.0 * PI * r.sinh())
}

/// Poincaré disk coordinates `(x/(1+z), y/(1+z))`.
pub fn to_poincare(p: &HypPoint) -> (f64, f64) {
    (p.x / (1.0 + p.z), p.y / (1.0 + p.z))
}

/// Klein disk coordinates; geodesics are straight chords there.
pub fn to_klein(p: &HypPoint) -> (f64, f64) {
    (p.x / p.z, p.y / p.z)
}

/// An isometry of the hyperbolic plane as a Lorentz matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [[f64; 3]; 3],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    /// Rotation about the origin by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Isometry { m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Translation by `t` along the x-axis; maps the origin to `(sinh t, 0, cosh t)`.
    pub fn translation_x(t: f64) -> Self {
        let (s, c) = (t.sinh(), t.cosh());
        Isometry { m: [[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]] }
    }

    /// Translation along the geodesic through the origin in direction `theta`.
    pub fn translation(t: f64, theta: f64) -> Self {
        Self::rotation(theta).compose(&Self::translation_x(t)).compose(&Self::rotation(-theta))
    }

    /// The translation taking the origin to `p` without rotating directions at the origin.
    pub fn translation_to(p: &HypPoint) -> Self {
        let r = dist(&HypPoint::ORIGIN, p);
        if r < EPS_HYP {
            return Self::IDENTITY;
        }
        Self::translation(r, p.angle())
    }

    /// Reflection across the x-axis (`y ↦ −y`); determinant −1.
    pub fn reflection_x() -> Self {
        Isometry { m: [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Isometry { m }
    }

    /// `J Mᵀ J`, the inverse of a Lorentz matrix.
    pub fn inverse(&self) -> Isometry {
        const J: [f64; 3] = [1.0, 1.0, -1.0];
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = J[i] * self.m[j][i] * J[j];
            }
        }
        Isometry { m }
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.determinant() > 0.0
    }

    /// Largest entry of `MᵀJM − J` in absolute value.
    pub fn lorentz_residual(&self) -> f64 {
        const J: [f64; 3] = [1.0, 1.0, -1.0];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| self.m[k][i] * J[k] * self.m[k][j]).sum();
                let target = if i == j { J[i] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    /// `M·p`, renormalized onto the hyperboloid.
    pub fn apply(&self, p: &HypPoint) -> HypPoint {
        let v = [p.x, p.y, p.z];
        let r: [f64; 3] = std::array::from_fn(|i| (0..3).map(|k| self.m[i][k] * v[k]).sum());
        // A Lorentz matrix keeps the sheet; fall back to the raw image only if
        // round-off has destroyed it entirely.
        HypPoint::normalized(r[0], r[1], r[2]).unwrap_or(HypPoint { x: r[0], y: r[1], z: r[2] })
    }
}

/// A geodesic segment between two distinct points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: HypPoint,
    pub b: HypPoint,
}

impl Segment {
    pub fn new(a: HypPoint, b: HypPoint) -> Result<Self> {
        if dist(&a, &b) <= EPS_HYP {
            return Err(Error::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        dist(&self.a, &self.b)
    }

    /// The point at fraction `t ∈ [0, 1]` of the way from `a` to `b`.
    pub fn point_at(&self, t: f64) -> HypPoint {
        geodesic_point(&self.a, &self.b, t)
    }
}

/// Point at fraction `t` along the geodesic from `a` to `b`.
pub fn geodesic_point(a: &HypPoint, b: &HypPoint, t: f64) -> HypPoint {
    let len = dist(a, b);
    if len < 1e-300 {
        return *a;
    }
    let sl = len.sinh();
    let wa = ((1.0 - t) * len).sinh() / sl;
    let wb = (t * len).sinh() / sl;
    HypPoint::normalized(wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z).unwrap_or(*a)
}

/// Minimum hyperbolic distance from `p` to the segment `s`.
///
/// Distance to a point is convex along a geodesic, so a golden-section search
/// on the arc parameter converges to the foot of the perpendicular, or to an
/// endpoint when the foot lies outside the segment.
pub fn point_segment_distance(p: &HypPoint, s: &Segment) -> f64 {
    let f = |t: f64| dist(p, &s.point_at(t));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > SEARCH_TOL {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    f((lo + hi) / 2.0).min(f(0.0)).min(f(1.0))
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn sign(v: f64, scale: f64) -> i8 {
    if v > 1e-12 * scale {
        1
    } else if v < -1e-12 * scale {
        -1
    } else {
        0
    }
}

/// True iff the two geodesic segments meet at a point interior to both.
///
/// Works in the Klein model, where geodesic segments are Euclidean chords.
/// Collinear segments count as crossing when they overlap along a stretch of
/// positive length.
pub fn segments_cross(s1: &Segment, s2: &Segment) -> bool {
    let (a1, a2) = (to_klein(&s1.a), to_klein(&s1.b));
    let (b1, b2) = (to_klein(&s2.a), to_klein(&s2.b));
    let la = ((a2.0 - a1.0).powi(2) + (a2.1 - a1.1).powi(2)).sqrt();
    let lb = ((b2.0 - b1.0).powi(2) + (b2.1 - b1.1).powi(2)).sqrt();
    let o1 = sign(orient(a1, a2, b1), la);
    let o2 = sign(orient(a1, a2, b2), la);
    let o3 = sign(orient(b1, b2, a1), lb);
    let o4 = sign(orient(b1, b2, a2), lb);

    if o1 == 0 && o2 == 0 {
        // Collinear: compare the parameter intervals along the first chord.
        let dir = ((a2.0 - a1.0) / la, (a2.1 - a1.1) / la);
        let proj = |p: (f64, f64)| (p.0 - a1.0) * dir.0 + (p.1 - a1.1) * dir.1;
        let (t1, t2) = (proj(b1), proj(b2));
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let overlap = hi.min(la) - lo.max(0.0);
        return overlap > 1e-12 * la.max(lb);
    }
    o1 * o2 < 0 && o3 * o4 < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut impl Rng, max_r: f64) -> HypPoint {
        HypPoint::from_polar(rng.gen_range(0.0..max_r), rng.gen_range(0.0..2.0 * PI))
    }

    fn random_isometry(rng: &mut impl Rng) -> Isometry {
        Isometry::rotation(rng.gen_range(0.0..2.0 * PI))
            .compose(&Isometry::translation_x(rng.gen_range(0.0..3.0)))
            .compose(&Isometry::rotation(rng.gen_range(0.0..2.0 * PI)))
    }

    #[test]
    fn distance_basics() {
        let o = HypPoint::ORIGIN;
        assert_eq!(dist(&o, &o), 0.0);
        let t: f64 = 1.5;
        let p = HypPoint::normalized(t.sinh(), 0.0, t.cosh()).unwrap();
        assert!((dist(&o, &p) - t).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = random_point(&mut rng, 5.0);
            let b = random_point(&mut rng, 5.0);
            assert_eq!(dist(&a, &b), dist(&b, &a));
        }
    }

    #[test]
    fn distance_matches_acosh_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = random_point(&mut rng, 4.0);
            let b = random_point(&mut rng, 4.0);
            let reference = (-minkowski(&a, &b)).max(1.0).acosh();
            assert!((dist(&a, &b) - reference).abs() < 1e-6, "{} vs {}", dist(&a, &b), reference);
        }
    }

    #[test]
    fn area_and_perimeter() {
        assert_eq!(disk_area(0.0).unwrap(), 0.0);
        assert_eq!(disk_perimeter(0.0).unwrap(), 0.0);
        assert!((disk_area(1.0).unwrap() - 3.412_276_265_285).abs() < 1e-9);
        assert!((disk_perimeter(1.0).unwrap() - 7.384_006_872_883).abs() < 1e-9);
        let ratio = disk_area(20.0).unwrap() / disk_area(19.0).unwrap();
        assert!((ratio - std::f64::consts::E).abs() < 1e-3);
        assert!(matches!(disk_area(-0.1), Err(Error::NegativeRadius(_))));
        assert!(matches!(disk_perimeter(-1.0), Err(Error::NegativeRadius(_))));
    }

    #[test]
    fn perimeter_is_derivative_of_area() {
        let h = 1e-5;
        for r in [0.5, 1.0, 2.0] {
            let fd = (disk_area(r + h).unwrap() - disk_area(r - h).unwrap()) / (2.0 * h);
            let per = disk_perimeter(r).unwrap();
            assert!(((fd - per) / per).abs() < 1e-6);
        }
    }

    #[test]
    fn area_grows_exponentially() {
        let mut r = 0.0;
        while r < 12.0 {
            assert!(disk_area(r + 0.5).unwrap() > disk_area(r).unwrap());
            assert!(disk_perimeter(r + 0.5).unwrap() > disk_perimeter(r).unwrap());
            if r >= 2.0 {
                assert!(disk_area(r + 1.0).unwrap() > 2.0 * disk_area(r).unwrap());
            }
            r += 0.25;
        }
    }

    #[test]
    fn isometries_preserve_distance() {
        let o = HypPoint::ORIGIN;
        let p = Isometry::IDENTITY.apply(&HypPoint::from_polar(1.2, 0.3));
        assert!((dist(&p, &HypPoint::from_polar(1.2, 0.3))) < 1e-12);
        let t: f64 = 0.8;
        let img = Isometry::translation_x(t).apply(&o);
        assert!((img.x() - t.sinh()).abs() < 1e-12 && img.y().abs() < 1e-15 && (img.z() - t.cosh()).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let m = random_isometry(&mut rng);
            assert!(m.lorentz_residual() < 1e-9);
            assert!(m.is_orientation_preserving());
            let a = random_point(&mut rng, 3.0);
            let b = random_point(&mut rng, 3.0);
            assert!((dist(&m.apply(&a), &m.apply(&b)) - dist(&a, &b)).abs() < 1e-9);
            let back = m.inverse().apply(&m.apply(&a));
            assert!(dist(&back, &a) < 1e-7);
        }
        assert!(!Isometry::reflection_x().is_orientation_preserving());
    }

    #[test]
    fn translation_to_hits_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let p = random_point(&mut rng, 4.0);
            let img = Isometry::translation_to(&p).apply(&HypPoint::ORIGIN);
            assert!(dist(&img, &p) < 1e-8);
        }
    }

    #[test]
    fn renormalization_keeps_points_on_sheet() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut p = HypPoint::ORIGIN;
        for _ in 0..100 {
            let m = Isometry::rotation(rng.gen_range(0.0..2.0 * PI)).compose(&Isometry::translation_x(0.3));
            p = m.apply(&p);
            assert!(p.residual().abs() < 1e-6);
            assert!(p.z() >= 1.0);
        }
    }

    #[test]
    fn segment_rejects_coincident_endpoints() {
        let o = HypPoint::ORIGIN;
        assert!(matches!(Segment::new(o, o), Err(Error::DegenerateSegment)));
    }

    #[test]
    fn point_segment_distance_cases() {
        let a = HypPoint::from_polar(1.0, 0.0);
        let b = HypPoint::from_polar(1.0, PI);
        let s = Segment::new(a, b).unwrap();
        assert!(point_segment_distance(&a, &s) < 1e-6);
        // Perpendicular bisector of ab through the origin: the foot is interior.
        let p = HypPoint::from_polar(0.7, PI / 2.0);
        let d = point_segment_distance(&p, &s);
        assert!(d < dist(&p, &a));
        assert!((d - 0.7).abs() < 1e-8);
    }

    #[test]
    fn point_segment_distance_matches_dense_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = random_point(&mut rng, 1.0);
            let b = random_point(&mut rng, 1.0);
            let p = random_point(&mut rng, 1.0);
            let Ok(s) = Segment::new(a, b) else { continue };
            // 1000 samples along the segment, then 1000 more across the
            // bracket around the best coarse sample.
            let coarse = (0..1000)
                .map(|i| (i as f64 / 999.0, dist(&p, &s.point_at(i as f64 / 999.0))))
                .fold((0.0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
            let lo = (coarse.0 - 1.0 / 999.0).max(0.0);
            let hi = (coarse.0 + 1.0 / 999.0).min(1.0);
            let brute =
                (0..1000).map(|i| dist(&p, &s.point_at(lo + (hi - lo) * i as f64 / 999.0))).fold(coarse.1, f64::min);
            let got = point_segment_distance(&p, &s);
            assert!((got - brute).abs() < 1e-6, "search {got} vs sampled {brute}");
        }
    }

    #[test]
    fn crossing_cases() {
        let o = HypPoint::ORIGIN;
        let a = HypPoint::from_polar(1.0, 0.0);
        let b = HypPoint::from_polar(1.0, 1.0);
        assert!(!segments_cross(&Segment::new(o, a).unwrap(), &Segment::new(o, b).unwrap()));

        let q: Vec<HypPoint> = (0..4).map(|k| HypPoint::from_polar(1.3, 0.2 + k as f64 * PI / 2.0)).collect();
        let d1 = Segment::new(q[0], q[2]).unwrap();
        let d2 = Segment::new(q[1], q[3]).unwrap();
        assert!(segments_cross(&d1, &d2));

        let far1 = Segment::new(HypPoint::from_polar(3.0, 0.0), HypPoint::from_polar(3.0, 0.2)).unwrap();
        let far2 = Segment::new(HypPoint::from_polar(3.0, PI), HypPoint::from_polar(3.0, PI + 0.2)).unwrap();
        assert!(!segments_cross(&far1, &far2));

        // Overlapping collinear pieces of one geodesic.
        let c1 = Segment::new(HypPoint::from_polar(1.0, PI), HypPoint::from_polar(0.5, 0.0)).unwrap();
        let c2 = Segment::new(HypPoint::from_polar(0.2, PI), HypPoint::from_polar(1.0, 0.0)).unwrap();
        assert!(segments_cross(&c1, &c2));
    }

    #[test]
    fn crossing_and_segment_distance_are_isometry_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut crossings = 0;
        for _ in 0..300 {
            let pts: Vec<HypPoint> = (0..5).map(|_| random_point(&mut rng, 1.5)).collect();
            let (Ok(s1), Ok(s2)) = (Segment::new(pts[0], pts[1]), Segment::new(pts[2], pts[3])) else {
                continue;
            };
            let m = random_isometry(&mut rng);
            let t1 = Segment::new(m.apply(&s1.a), m.apply(&s1.b)).unwrap();
            let t2 = Segment::new(m.apply(&s2.a), m.apply(&s2.b)).unwrap();
            let cross = segments_cross(&s1, &s2);
            crossings += cross as usize;
            assert_eq!(cross, segments_cross(&t1, &t2));
            let d = point_segment_distance(&pts[4], &s1);
            let dt = point_segment_distance(&m.apply(&pts[4]), &t1);
            assert!((d - dt).abs() < 1e-7);
        }
        assert!(crossings > 10);
    }

    #[test]
    fn poincare_projection() {
        assert_eq!(to_poincare(&HypPoint::ORIGIN), (0.0, 0.0));
        let t: f64 = 2.0;
        let (u, v) = to_poincare(&HypPoint::from_polar(t, 0.0));
        assert!((u - (t / 2.0).tanh()).abs() < 1e-12 && v.abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let (u, v) = to_poincare(&random_point(&mut rng, 12.0));
            assert!(u * u + v * v < 1.0);
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let a = random_point(&mut rng, 6.0);
            let b = random_point(&mut rng, 6.0);
            let c = random_point(&mut rng, 6.0);
            assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-9);
        }
    }

    #[test]
    fn from_coords_checks_sheet() {
        assert!(HypPoint::from_coords(0.0, 0.0, 1.0).is_ok());
        assert!(HypPoint::from_coords(1.0, 0.0, 1.0).is_err());
        assert!(HypPoint::from_coords(0.0, 0.0, -1.0).is_err());
        assert!(HypPoint::normalized(0.0, 0.0, 0.0).is_err());
    }
}
