//! Plane domains described by finitely many closed complement primitives.

use crate::error::{Error, Result};
use crate::geom::{pt, segment_point_distance, Annulus, Point};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleSide {
    /// The closed disk is removed.
    Hole,
    /// The closed exterior of the disk is removed.
    Complement,
}

/// One closed piece of the complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Point(Point),
    Circle { center: Point, radius: f64, side: CircleSide },
    /// Closed half-plane to the right of the directed line; the domain side is on the left.
    Line { point: Point, direction: Point },
}

impl Primitive {
    /// Distance from `z` to the removed set (zero when `z` is in it).
    pub fn distance(&self, z: Point) -> f64 {
        match *self {
            Primitive::Point(p) => (z - p).norm(),
            Primitive::Circle { center, radius, side } => {
                let r = (z - center).norm();
                match side {
                    CircleSide::Hole => (r - radius).max(0.0),
                    CircleSide::Complement => (radius - r).max(0.0),
                }
            }
            Primitive::Line { point, direction } => self::signed_left(point, direction, z).max(0.0),
        }
    }

    /// Nearest point of the removed set to `z`, assuming `z` lies outside it.
    pub fn nearest(&self, z: Point) -> Point {
        match *self {
            Primitive::Point(p) => p,
            Primitive::Circle { center, radius, .. } => {
                let v = z - center;
                let n = v.norm();
                if n == 0.0 {
                    center + radius
                } else {
                    center + v * (radius / n)
                }
            }
            Primitive::Line { point, direction } => {
                let s = ((z - point) * direction.conj()).re;
                point + direction * s
            }
        }
    }

    /// Range of `|ξ - from|` over the removed set, together with the unit
    /// direction along which every distance in the range is realized.
    pub fn radial_range(&self, from: Point) -> (f64, f64, Point) {
        match *self {
            Primitive::Point(p) => {
                let v = p - from;
                let n = v.norm();
                let u = if n > 0.0 { v / n } else { pt(1.0, 0.0) };
                (n, n, u)
            }
            Primitive::Circle { center, radius, side } => {
                let v = center - from;
                let n = v.norm();
                let toward = if n > 0.0 { v / n } else { pt(1.0, 0.0) };
                match side {
                    CircleSide::Hole => ((n - radius).max(0.0), n + radius, toward),
                    CircleSide::Complement => ((radius - n).max(0.0), f64::INFINITY, -toward),
                }
            }
            Primitive::Line { point, direction } => {
                let s = signed_left(point, direction, from).max(0.0);
                // the outward normal points to the right of the direction
                (s, f64::INFINITY, direction * pt(0.0, -1.0))
            }
        }
    }

    /// Minimum distance from the segment `[p0, p1]` to the removed set.
    pub fn segment_clearance(&self, p0: Point, p1: Point) -> f64 {
        match *self {
            Primitive::Point(p) => segment_point_distance(p0, p1, p),
            Primitive::Circle { center, radius, side } => match side {
                CircleSide::Hole => segment_point_distance(p0, p1, center) - radius,
                CircleSide::Complement => radius - (p0 - center).norm().max((p1 - center).norm()),
            },
            Primitive::Line { point, direction } => {
                signed_left(point, direction, p0).min(signed_left(point, direction, p1))
            }
        }
    }
}

fn signed_left(point: Point, direction: Point, z: Point) -> f64 {
    ((z - point) * direction.conj()).im
}

/// Recognized model domains, which unlock closed-form densities and distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelTag {
    UnitDisk,
    PuncturedUnitDisk,
    PuncturedPlane { o: Point },
    TwicePuncturedPlane { a: Point, b: Point },
    Annulus { o: Point, d: f64, m: f64 },
    HalfPlane { point: Point, direction: Point },
    DiskComplement { o: Point, r: f64 },
    PuncturedDisk { o: Point, r: f64 },
}

impl ModelTag {
    pub fn name(&self) -> &'static str {
        match self {
            ModelTag::UnitDisk => "unit_disk",
            ModelTag::PuncturedUnitDisk => "punctured_unit_disk",
            ModelTag::PuncturedPlane { .. } => "punctured_plane",
            ModelTag::TwicePuncturedPlane { .. } => "twice_punctured_plane",
            ModelTag::Annulus { .. } => "annulus",
            ModelTag::HalfPlane { .. } => "half_plane",
            ModelTag::DiskComplement { .. } => "disk_complement",
            ModelTag::PuncturedDisk { .. } => "punctured_disk",
        }
    }

    /// Center and radius for the punctured-disk family.
    pub fn punctured_disk_params(&self) -> Option<(Point, f64)> {
        match *self {
            ModelTag::PuncturedUnitDisk => Some((pt(0.0, 0.0), 1.0)),
            ModelTag::PuncturedDisk { o, r } => Some((o, r)),
            _ => None,
        }
    }
}

/// `δ(z)` together with the nearest boundary points `B(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NearBoundarySet {
    pub distance: f64,
    pub witnesses: Vec<Point>,
}

/// Result of testing an annulus against a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnnulusMembership {
    /// `A ⊂ Ω` and its center lies in the complement.
    pub inside: bool,
    pub inner_touches: bool,
    pub outer_touches: bool,
}

impl AnnulusMembership {
    /// Membership in the family with at least one boundary circle meeting `∂Ω`.
    pub fn touches_one(&self) -> bool {
        self.inside && (self.inner_touches || self.outer_touches)
    }

    pub fn touches_both(&self) -> bool {
        self.inside && self.inner_touches && self.outer_touches
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    primitives: Vec<Primitive>,
    model: Option<ModelTag>,
    hyperbolic: bool,
}

impl Domain {
    /// Builds a domain, classifying it against the model list.
    pub fn new(primitives: Vec<Primitive>) -> Result<Domain> {
        if primitives.is_empty() {
            return Err(Error::InvalidDomain("at least one boundary primitive is required".into()));
        }
        let mut prims = Vec::with_capacity(primitives.len());
        for p in primitives {
            prims.push(match p {
                Primitive::Circle { radius, .. } if !(radius > 0.0 && radius.is_finite()) => {
                    return Err(Error::InvalidDomain(format!("circle radius {radius}")));
                }
                Primitive::Line { point, direction } => {
                    let n = direction.norm();
                    if !(n > 0.0 && n.is_finite()) {
                        return Err(Error::InvalidDomain("line direction must be nonzero".into()));
                    }
                    Primitive::Line { point, direction: direction / n }
                }
                other => other,
            });
        }
        for p in &prims {
            let coords: Vec<f64> = match *p {
                Primitive::Point(z) => vec![z.re, z.im],
                Primitive::Circle { center, radius, .. } => vec![center.re, center.im, radius],
                Primitive::Line { point, direction } => vec![point.re, point.im, direction.re, direction.im],
            };
            if coords.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidDomain("non-finite coordinate".into()));
            }
        }
        let n_points = prims.iter().filter(|p| matches!(p, Primitive::Point(_))).count();
        let hyperbolic = n_points < prims.len() || n_points >= 2;
        let model = classify(&prims);
        Ok(Domain { primitives: prims, model, hyperbolic })
    }

    /// Builds a domain and checks it against an expected model name.
    pub fn with_model(primitives: Vec<Primitive>, model: &str) -> Result<Domain> {
        let dom = Domain::new(primitives)?;
        let got = dom.model.map(|m| m.name());
        let ok = match (model, got) {
            ("punctured_disk", Some("punctured_unit_disk")) => true,
            (want, Some(g)) => want == g,
            (_, None) => false,
        };
        if !ok {
            return Err(Error::InvalidDomain(format!(
                "primitives do not describe a {model} (classified as {})",
                got.unwrap_or("a general domain")
            )));
        }
        Ok(dom)
    }

    pub fn unit_disk() -> Domain {
        Domain::new(vec![Primitive::Circle { center: pt(0.0, 0.0), radius: 1.0, side: CircleSide::Complement }]).unwrap()
    }

    pub fn punctured_unit_disk() -> Domain {
        Domain::punctured_disk(pt(0.0, 0.0), 1.0).unwrap()
    }

    pub fn punctured_disk(o: Point, r: f64) -> Result<Domain> {
        Domain::new(vec![Primitive::Point(o), Primitive::Circle { center: o, radius: r, side: CircleSide::Complement }])
    }

    pub fn punctured_plane(o: Point) -> Domain {
        Domain::new(vec![Primitive::Point(o)]).unwrap()
    }

    pub fn punctured_at(points: &[Point]) -> Result<Domain> {
        Domain::new(points.iter().map(|&p| Primitive::Point(p)).collect())
    }

    /// `C \ {0, 1}`.
    pub fn twice_punctured_plane() -> Domain {
        Domain::punctured_at(&[pt(0.0, 0.0), pt(1.0, 0.0)]).unwrap()
    }

    /// The round annulus `A(o; d, m)` as a domain.
    pub fn annulus(o: Point, d: f64, m: f64) -> Result<Domain> {
        let a = Annulus::new(o, d, m)?;
        Domain::new(vec![
            Primitive::Circle { center: o, radius: a.inner_radius(), side: CircleSide::Hole },
            Primitive::Circle { center: o, radius: a.outer_radius(), side: CircleSide::Complement },
        ])
    }

    /// Half-plane to the left of the directed line through `point`.
    pub fn half_plane(point: Point, direction: Point) -> Result<Domain> {
        Domain::new(vec![Primitive::Line { point, direction }])
    }

    /// Upper half-plane `{Im z > 0}`.
    pub fn upper_half_plane() -> Domain {
        Domain::half_plane(pt(0.0, 0.0), pt(1.0, 0.0)).unwrap()
    }

    /// `C \ D[o; r]`.
    pub fn disk_complement(o: Point, r: f64) -> Result<Domain> {
        Domain::new(vec![Primitive::Circle { center: o, radius: r, side: CircleSide::Hole }])
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn model(&self) -> Option<ModelTag> {
        self.model
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.hyperbolic
    }

    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.hyperbolic {
            Ok(())
        } else {
            Err(Error::NotHyperbolic)
        }
    }

    /// Whether the domain is bounded.
    pub fn is_bounded(&self) -> bool {
        self.primitives
            .iter()
            .any(|p| matches!(p, Primitive::Circle { side: CircleSide::Complement, .. }))
    }

    /// Points around which a path can wind: point primitives and centers of holes.
    pub fn winding_centers(&self) -> Vec<Point> {
        self.primitives
            .iter()
            .filter_map(|p| match *p {
                Primitive::Point(z) => Some(z),
                Primitive::Circle { center, side: CircleSide::Hole, .. } => Some(center),
                _ => None,
            })
            .collect()
    }

    /// Point primitives of the complement.
    pub fn complement_points(&self) -> Vec<Point> {
        self.primitives
            .iter()
            .filter_map(|p| match *p {
                Primitive::Point(z) => Some(z),
                _ => None,
            })
            .collect()
    }

    fn raw_delta(&self, z: Point) -> f64 {
        self.primitives.iter().map(|p| p.distance(z)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: Point) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.raw_delta(z) > 0.0
    }

    /// `δ(z) = dist(z, ∂Ω)`.
    pub fn delta(&self, z: Point) -> Result<f64> {
        let d = self.raw_delta(z);
        if d > 0.0 && d.is_finite() {
            Ok(d)
        } else {
            Err(Error::NotInDomain(z))
        }
    }

    /// Nearest boundary points within `tol` of `δ(z)`, sorted lexicographically.
    pub fn nearest_boundary_points(&self, z: Point, tol: f64) -> Result<NearBoundarySet> {
        let delta = self.delta(z)?;
        let mut witnesses: Vec<Point> = Vec::new();
        for p in &self.primitives {
            if p.distance(z) <= delta + tol {
                let w = p.nearest(z);
                if !witnesses.iter().any(|&x| (x - w).norm() <= tol) {
                    witnesses.push(w);
                }
            }
        }
        witnesses.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(NearBoundarySet { distance: delta, witnesses })
    }

    /// Default witness tolerance `1e-9 (1 + δ)`.
    pub fn default_tol(delta: f64) -> f64 {
        1e-9 * (1.0 + delta)
    }

    /// Minimum distance from the closed segment to the complement; positive iff the segment lies in the domain.
    pub fn segment_clearance(&self, p0: Point, p1: Point) -> f64 {
        self.primitives.iter().map(|p| p.segment_clearance(p0, p1)).fold(f64::INFINITY, f64::min)
    }

    /// Tests `A ⊂ Ω` with center in the complement, and boundary contact of each circle.
    pub fn annulus_in_domain(&self, a: &Annulus) -> AnnulusMembership {
        let o = a.center();
        let (r, big_r) = (a.inner_radius(), a.outer_radius());
        let rel = 1e-9;
        let mut inside = !self.contains(o);
        let mut inner_touches = false;
        let mut outer_touches = false;
        for p in &self.primitives {
            let (lo, hi, _) = p.radial_range(o);
            let below = hi <= r * (1.0 + rel);
            let above = lo >= big_r * (1.0 - rel);
            if !(below || above) {
                inside = false;
            }
            if r > 0.0 && below && hi >= r * (1.0 - rel) {
                inner_touches = true;
            }
            if big_r.is_finite() && above && lo <= big_r * (1.0 + rel) {
                outer_touches = true;
            }
        }
        AnnulusMembership { inside, inner_touches, outer_touches }
    }

    /// Image of the domain under `z ↦ 1/z`; requires `0 ∉ Ω` and no line primitives.
    pub fn inverted(&self) -> Result<Domain> {
        if self.contains(pt(0.0, 0.0)) {
            return Err(Error::Parameter("inversion needs 0 in the complement".into()));
        }
        let mut out = Vec::new();
        for p in &self.primitives {
            match *p {
                Primitive::Point(z) => {
                    if z.norm() > 0.0 {
                        out.push(Primitive::Point(1.0 / z));
                    }
                }
                Primitive::Circle { center, radius, side } => {
                    let c2 = center.norm_sqr();
                    let den = c2 - radius * radius;
                    if den.abs() <= 1e-14 * (1.0 + c2) {
                        return Err(Error::Parameter("inversion of a circle through 0".into()));
                    }
                    let zero_inside = den < 0.0;
                    let new_side = match (side, zero_inside) {
                        (CircleSide::Hole, true) | (CircleSide::Complement, false) => CircleSide::Complement,
                        _ => CircleSide::Hole,
                    };
                    out.push(Primitive::Circle { center: center.conj() / den, radius: radius / den.abs(), side: new_side });
                }
                Primitive::Line { .. } => {
                    return Err(Error::Parameter("inversion of half-plane domains is not supported".into()));
                }
            }
        }
        let unbounded = !self.primitives.iter().any(|p| {
            matches!(p, Primitive::Circle { side: CircleSide::Complement, .. } | Primitive::Line { .. })
        });
        if unbounded {
            out.push(Primitive::Point(pt(0.0, 0.0)));
        }
        Domain::new(out)
    }

    pub fn to_file(&self) -> DomainFile {
        let mut f = DomainFile { model: self.model.map(|m| m.name().to_string()), ..Default::default() };
        for p in &self.primitives {
            match *p {
                Primitive::Point(z) => f.points.push([z.re, z.im]),
                Primitive::Circle { center, radius, side } => {
                    f.circles.push(CircleSpec { center: [center.re, center.im], radius, side })
                }
                Primitive::Line { point, direction } => f.lines.push(LineSpec {
                    point: [point.re, point.im],
                    direction: [direction.re, direction.im],
                }),
            }
        }
        f
    }

    pub fn from_file(f: &DomainFile) -> Result<Domain> {
        let mut prims: Vec<Primitive> = f.points.iter().map(|p| Primitive::Point(pt(p[0], p[1]))).collect();
        prims.extend(f.circles.iter().map(|c| Primitive::Circle {
            center: pt(c.center[0], c.center[1]),
            radius: c.radius,
            side: c.side,
        }));
        prims.extend(f.lines.iter().map(|l| Primitive::Line {
            point: pt(l.point[0], l.point[1]),
            direction: pt(l.direction[0], l.direction[1]),
        }));
        match (&f.model, prims.is_empty()) {
            (Some(m), true) => match m.as_str() {
                "unit_disk" => Ok(Domain::unit_disk()),
                "punctured_unit_disk" => Ok(Domain::punctured_unit_disk()),
                "punctured_plane" => Ok(Domain::punctured_plane(pt(0.0, 0.0))),
                "twice_punctured_plane" => Ok(Domain::twice_punctured_plane()),
                "half_plane" => Ok(Domain::upper_half_plane()),
                other => Err(Error::InvalidDomain(format!("model {other} needs explicit primitives"))),
            },
            (Some(m), false) => Domain::with_model(prims, m),
            (None, _) => Domain::new(prims),
        }
    }

    pub fn from_json(text: &str) -> Result<Domain> {
        let f: DomainFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidDomain(format!("domain file: {e}")))?;
        Domain::from_file(&f)
    }
}

fn same(a: Point, b: Point) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm())
}

fn classify(prims: &[Primitive]) -> Option<ModelTag> {
    use CircleSide::*;
    use Primitive as P;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs());
    match prims {
        [P::Point(o)] => Some(ModelTag::PuncturedPlane { o: *o }),
        [P::Point(a), P::Point(b)] => Some(ModelTag::TwicePuncturedPlane { a: *a, b: *b }),
        [P::Circle { center, radius, side: Complement }] => {
            (same(*center, pt(0.0, 0.0)) && close(*radius, 1.0)).then_some(ModelTag::UnitDisk)
        }
        [P::Circle { center, radius, side: Hole }] => Some(ModelTag::DiskComplement { o: *center, r: *radius }),
        [P::Point(o), P::Circle { center, radius, side: Complement }]
        | [P::Circle { center, radius, side: Complement }, P::Point(o)]
            if same(*o, *center) =>
        {
            if same(*o, pt(0.0, 0.0)) && close(*radius, 1.0) {
                Some(ModelTag::PuncturedUnitDisk)
            } else {
                Some(ModelTag::PuncturedDisk { o: *o, r: *radius })
            }
        }
        [P::Circle { center: c1, radius: r1, side: Hole }, P::Circle { center: c2, radius: r2, side: Complement }]
        | [P::Circle { center: c2, radius: r2, side: Complement }, P::Circle { center: c1, radius: r1, side: Hole }]
            if same(*c1, *c2) && r1 < r2 =>
        {
            Some(ModelTag::Annulus { o: *c1, d: (r1 * r2).sqrt(), m: 0.5 * (r2 / r1).ln() })
        }
        [P::Line { point, direction }] => Some(ModelTag::HalfPlane { point: *point, direction: *direction }),
        _ => None,
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DomainFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub circles: Vec<CircleSpec>,
    #[serde(default)]
    pub lines: Vec<LineSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub side: CircleSide,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineSpec {
    pub point: [f64; 2],
    pub direction: [f64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn deltas() {
        let d = Domain::punctured_unit_disk();
        assert_relative_eq!(d.delta(pt(0.3, 0.0)).unwrap(), 0.3);
        assert_relative_eq!(Domain::twice_punctured_plane().delta(pt(0.25, 0.0)).unwrap(), 0.25);
        assert_relative_eq!(Domain::disk_complement(pt(0.0, 0.0), 1.0).unwrap().delta(pt(3.0, 0.0)).unwrap(), 2.0);
        assert!(matches!(d.delta(pt(0.0, 0.0)), Err(Error::NotInDomain(_))));
        assert!(d.delta(pt(1.5, 0.0)).is_err());
    }

    #[test]
    fn membership() {
        let d = Domain::punctured_unit_disk();
        assert!(!d.contains(pt(0.0, 0.0)));
        assert!(d.contains(pt(0.5, 0.0)));
        assert!(!Domain::disk_complement(pt(0.0, 0.0), 1.0).unwrap().contains(pt(0.5, 0.0)));
        let h = Domain::upper_half_plane();
        assert!(h.contains(pt(0.0, 1.0)));
        assert!(!h.contains(pt(0.0, -1.0)));
        assert_relative_eq!(h.delta(pt(3.0, 2.0)).unwrap(), 2.0);
    }

    #[test]
    fn witnesses() {
        let d = Domain::punctured_unit_disk();
        let b = d.nearest_boundary_points(pt(0.5, 0.0), 1e-9).unwrap();
        assert_relative_eq!(b.distance, 0.5);
        assert_eq!(b.witnesses, vec![pt(0.0, 0.0), pt(1.0, 0.0)]);
        let c = Domain::twice_punctured_plane();
        assert_eq!(c.nearest_boundary_points(pt(0.25, 0.0), 1e-9).unwrap().witnesses, vec![pt(0.0, 0.0)]);
        assert_eq!(c.nearest_boundary_points(pt(0.5, 0.0), 1e-9).unwrap().witnesses.len(), 2);
    }

    #[test]
    fn annulus_membership() {
        let c = Domain::twice_punctured_plane();
        let a = Annulus::from_radii(pt(0.0, 0.0), 0.0625, 1.0).unwrap();
        let m = c.annulus_in_domain(&a);
        assert!(m.inside && m.outer_touches && !m.inner_touches);
        let d = Domain::punctured_unit_disk();
        let m = d.annulus_in_domain(&Annulus::from_radii(pt(0.0, 0.0), 0.1, 0.4).unwrap());
        assert!(m.inside && !m.inner_touches && !m.outer_touches);
        assert!(!c.annulus_in_domain(&Annulus::from_radii(pt(0.0, 0.0), 0.5, 2.0).unwrap()).inside);
        // center must lie in the complement
        assert!(!c.annulus_in_domain(&Annulus::from_radii(pt(3.0, 0.0), 0.1, 0.2).unwrap()).inside);
    }

    #[test]
    fn classification() {
        assert_eq!(Domain::unit_disk().model(), Some(ModelTag::UnitDisk));
        assert_eq!(Domain::punctured_unit_disk().model(), Some(ModelTag::PuncturedUnitDisk));
        assert!(!Domain::punctured_plane(pt(0.0, 0.0)).is_hyperbolic());
        assert!(Domain::twice_punctured_plane().is_hyperbolic());
        match Domain::annulus(pt(0.0, 0.0), 2.0, 1.0).unwrap().model() {
            Some(ModelTag::Annulus { d, m, .. }) => {
                assert_relative_eq!(d, 2.0, epsilon = 1e-12);
                assert_relative_eq!(m, 1.0, epsilon = 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(Domain::with_model(vec![Primitive::Point(pt(0.0, 0.0))], "unit_disk").is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"model":"punctured_unit_disk","points":[[0,0]],
            "circles":[{"center":[0,0],"radius":1,"side":"complement"}]}"#;
        let d = Domain::from_json(text).unwrap();
        assert_eq!(d.model(), Some(ModelTag::PuncturedUnitDisk));
        let again = Domain::from_file(&d.to_file()).unwrap();
        assert_eq!(again, d);
        assert_eq!(Domain::from_json(r#"{"model":"twice_punctured_plane"}"#).unwrap(), Domain::twice_punctured_plane());
        assert!(Domain::from_json(r#"{"points":[]}"#).is_err());
    }

    #[test]
    fn inversion() {
        let d = Domain::punctured_unit_disk().inverted().unwrap();
        assert_eq!(d.model(), Some(ModelTag::DiskComplement { o: pt(0.0, 0.0), r: 1.0 }));
        let c = Domain::twice_punctured_plane().inverted().unwrap();
        assert!(c.contains(pt(0.5, 0.5)) && !c.contains(pt(1.0, 0.0)) && !c.contains(pt(0.0, 0.0)));
        let e = Domain::punctured_at(&[pt(0.0, 0.0), pt(2.0, 0.0)]).unwrap().inverted().unwrap();
        assert!(!e.contains(pt(0.5, 0.0)));
        // a hole not containing 0 maps to a hole
        let h = Domain::new(vec![
            Primitive::Point(pt(0.0, 0.0)),
            Primitive::Circle { center: pt(3.0, 0.0), radius: 1.0, side: CircleSide::Hole },
        ])
        .unwrap()
        .inverted()
        .unwrap();
        assert!(!h.contains(pt(0.4, 0.0)) && h.contains(pt(0.2, 0.0)) && h.contains(pt(0.6, 0.0)));
    }
}
