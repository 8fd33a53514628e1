//! Orbital angular-momentum and electromagnetic moment tensors of point
//! charges and static current loops, and the far-field multipole expansion of
//! the 4-potential built from them.
//!
//! All sources are treated in the static limit: the retarded time is replaced
//! by the common sampling time of the system. The 4-current of a point charge
//! is `J^μ = e u^μ (dτ/dt) δ³(x − x_n) = e (1, v) δ³(x − x_n)`.

use std::f64::consts::PI;
use std::io::Read;
use std::ops::Deref;
use std::path::Path;

use nalgebra::Matrix4;

use crate::clifford::VectorTransform;
use crate::error::{Error, Result};

const FOUR_PI: f64 = 4.0 * PI;

/// Column order of particle CSV files.
pub const PARTICLE_CSV_HEADER: [&str; 9] = ["mass", "charge", "t", "x", "y", "z", "vx", "vy", "vz"];
/// Column order of current-loop CSV files.
pub const LOOP_CSV_HEADER: [&str; 7] = ["x", "y", "z", "dlx", "dly", "dlz", "current"];

/// A point charge sampled at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedParticle {
    rest_mass: f64,
    charge: f64,
    position: [f64; 4],
    velocity: [f64; 3],
}

impl ChargedParticle {
    pub fn new(rest_mass: f64, charge: f64, position: [f64; 4], velocity: [f64; 3]) -> Result<Self> {
        if !(rest_mass.is_finite() && rest_mass > 0.0) {
            return Err(Error::InvalidParticle(format!("rest mass {rest_mass} must be positive")));
        }
        if !charge.is_finite() || position.iter().chain(velocity.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParticle("non-finite charge, position or velocity".into()));
        }
        let speed_sq = dot3(velocity, velocity);
        if speed_sq >= 1.0 {
            return Err(Error::InvalidParticle(format!(
                "speed {} is not below the speed of light",
                speed_sq.sqrt()
            )));
        }
        Ok(ChargedParticle {
            rest_mass,
            charge,
            position,
            velocity,
        })
    }

    /// A particle at rest at spatial point `x` at time `t`.
    pub fn at_rest(rest_mass: f64, charge: f64, t: f64, x: [f64; 3]) -> Result<Self> {
        Self::new(rest_mass, charge, [t, x[0], x[1], x[2]], [0.0; 3])
    }

    pub fn rest_mass(&self) -> f64 {
        self.rest_mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn position(&self) -> [f64; 4] {
        self.position
    }

    pub fn spatial_position(&self) -> [f64; 3] {
        [self.position[1], self.position[2], self.position[3]]
    }

    pub fn velocity(&self) -> [f64; 3] {
        self.velocity
    }

    pub fn speed(&self) -> f64 {
        dot3(self.velocity, self.velocity).sqrt()
    }

    pub fn lorentz_factor(&self) -> f64 {
        1.0 / (1.0 - dot3(self.velocity, self.velocity)).sqrt()
    }

    pub fn four_velocity(&self) -> [f64; 4] {
        let g = self.lorentz_factor();
        [g, g * self.velocity[0], g * self.velocity[1], g * self.velocity[2]]
    }

    pub fn four_momentum(&self) -> [f64; 4] {
        self.four_velocity().map(|u| self.rest_mass * u)
    }

    /// `m' = γ m`.
    pub fn relativistic_mass(&self) -> f64 {
        self.lorentz_factor() * self.rest_mass
    }

    /// `e dx^μ/dt = e u^μ dτ/dt`, the weight of the particle's delta function
    /// in the 4-current.
    pub fn current_weight(&self) -> [f64; 4] {
        let v = self.velocity;
        [self.charge, self.charge * v[0], self.charge * v[1], self.charge * v[2]]
    }

    /// The same world point and 4-momentum seen from a transformed frame.
    pub fn transformed(&self, lambda: &VectorTransform) -> ChargedParticle {
        let x = lambda.apply(self.position);
        let u = lambda.apply(self.four_velocity());
        ChargedParticle {
            rest_mass: self.rest_mass,
            charge: self.charge,
            position: x,
            velocity: [u[1] / u[0], u[2] / u[0], u[3] / u[0]],
        }
    }
}

/// A non-empty set of charges sampled at a common time.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    particles: Vec<ChargedParticle>,
    common_time: f64,
}

impl ParticleSystem {
    pub fn new(particles: Vec<ChargedParticle>) -> Result<Self> {
        let first = particles
            .first()
            .ok_or_else(|| Error::InvalidSystem("particle system is empty".into()))?;
        let t = first.position[0];
        if let Some(p) = particles.iter().find(|p| p.position[0] != t) {
            return Err(Error::InvalidSystem(format!(
                "particles sampled at different times ({t} and {})",
                p.position[0]
            )));
        }
        Ok(ParticleSystem {
            particles,
            common_time: t,
        })
    }

    pub fn common_time(&self) -> f64 {
        self.common_time
    }

    pub fn particles(&self) -> &[ChargedParticle] {
        &self.particles
    }

    /// Union of two systems sampled at the same time.
    pub fn union(&self, other: &ParticleSystem) -> Result<ParticleSystem> {
        let mut all = self.particles.clone();
        all.extend_from_slice(&other.particles);
        ParticleSystem::new(all)
    }

    /// Transform every particle's event and 4-velocity. The transformed events
    /// are generally no longer simultaneous, so the result is a bare list.
    pub fn transformed(&self, lambda: &VectorTransform) -> Vec<ChargedParticle> {
        self.particles.iter().map(|p| p.transformed(lambda)).collect()
    }

    /// Largest distance of a particle from the spatial origin.
    pub fn source_radius(&self) -> f64 {
        self.particles
            .iter()
            .map(|p| norm3(p.spatial_position()))
            .fold(0.0, f64::max)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(file).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Parse `mass,charge,t,x,y,z,vx,vy,vz` rows. The header must match exactly.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let rows = read_csv_rows(reader, &PARTICLE_CSV_HEADER)?;
        let particles = rows
            .into_iter()
            .map(|r| ChargedParticle::new(r[0], r[1], [r[2], r[3], r[4], r[5]], [r[6], r[7], r[8]]))
            .collect::<Result<Vec<_>>>()?;
        ParticleSystem::new(particles)
    }
}

impl Deref for ParticleSystem {
    type Target = [ChargedParticle];

    fn deref(&self) -> &[ChargedParticle] {
        &self.particles
    }
}

fn read_csv_rows<R: Read>(reader: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let parse_err = |message: String| Error::Parse {
        path: "<csv>".into(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let found = rdr.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(parse_err(format!(
            "expected header `{}`, found `{}`",
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("row {}: `{field}` is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// One straight piece of a static current path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub midpoint: [f64; 3],
    /// Direction times length.
    pub dl: [f64; 3],
    pub current: f64,
}

impl Segment {
    pub fn start(&self) -> [f64; 3] {
        sub3(self.midpoint, scale3(self.dl, 0.5))
    }

    pub fn end(&self) -> [f64; 3] {
        add3(self.midpoint, scale3(self.dl, 0.5))
    }
}

/// A stationary current carried by straight segments.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticCurrentLoop {
    segments: Vec<Segment>,
}

impl StaticCurrentLoop {
    pub fn new(segments: Vec<Segment>) -> Self {
        StaticCurrentLoop { segments }
    }

    /// Closed polygon through `vertices` (last vertex joins the first).
    pub fn polygon(vertices: &[[f64; 3]], current: f64) -> Self {
        let n = vertices.len();
        let segments = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                Segment {
                    midpoint: scale3(add3(a, b), 0.5),
                    dl: sub3(b, a),
                    current,
                }
            })
            .collect();
        StaticCurrentLoop { segments }
    }

    /// Square of side `side` centred on the origin in the xy-plane,
    /// counter-clockwise seen from +z, each side split into `per_side` pieces.
    pub fn square(side: f64, current: f64, per_side: usize) -> Self {
        let h = side / 2.0;
        let corners = [[h, -h, 0.0], [h, h, 0.0], [-h, h, 0.0], [-h, -h, 0.0]];
        let per_side = per_side.max(1);
        let mut vertices = Vec::with_capacity(4 * per_side);
        for i in 0..4 {
            let (a, b) = (corners[i], corners[(i + 1) % 4]);
            for k in 0..per_side {
                let s = k as f64 / per_side as f64;
                vertices.push(add3(a, scale3(sub3(b, a), s)));
            }
        }
        Self::polygon(&vertices, current)
    }

    /// Regular polygon with `n` vertices on a circle of `radius` in the xy-plane.
    pub fn circle(radius: f64, current: f64, n: usize) -> Self {
        let vertices: Vec<[f64; 3]> = (0..n)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / n as f64;
                [radius * phi.cos(), radius * phi.sin(), 0.0]
            })
            .collect();
        Self::polygon(&vertices, current)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Drop one segment, leaving an open path.
    pub fn without_segment(&self, index: usize) -> Self {
        let mut segments = self.segments.clone();
        segments.remove(index);
        StaticCurrentLoop { segments }
    }

    /// |Σ dl| relative to Σ |dl|.
    pub fn closure_residual(&self) -> f64 {
        let total = self.segments.iter().fold([0.0; 3], |acc, s| add3(acc, s.dl));
        let length: f64 = self.segments.iter().map(|s| norm3(s.dl)).sum();
        if length == 0.0 {
            0.0
        } else {
            norm3(total) / length
        }
    }

    pub fn source_radius(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| norm3(s.start()).max(norm3(s.end())))
            .fold(0.0, f64::max)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(file).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    /// Parse `x,y,z,dlx,dly,dlz,current` rows (segment midpoint, direction
    /// times length, current).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let rows = read_csv_rows(reader, &LOOP_CSV_HEADER)?;
        Ok(StaticCurrentLoop {
            segments: rows
                .into_iter()
                .map(|r| Segment {
                    midpoint: [r[0], r[1], r[2]],
                    dl: [r[3], r[4], r[5]],
                    current: r[6],
                })
                .collect(),
        })
    }
}

/// Antisymmetric `L^μν = Σ (x^μ p^ν − x^ν p^μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalTensor(Matrix4<f64>);

/// Antisymmetric `M^μν = ½ ∫ (x^μ J^ν − x^ν J^μ) d³x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTensor(Matrix4<f64>);

macro_rules! antisymmetric_tensor {
    ($t:ty) => {
        impl $t {
            pub fn zero() -> Self {
                Self(Matrix4::zeros())
            }

            pub fn get(&self, mu: usize, nu: usize) -> f64 {
                self.0[(mu, nu)]
            }

            pub fn matrix(&self) -> &Matrix4<f64> {
                &self.0
            }

            /// max |T^μν + T^νμ|
            pub fn antisymmetry_residual(&self) -> f64 {
                (self.0 + self.0.transpose()).amax()
            }

            pub fn max_abs_diff(&self, other: &Matrix4<f64>) -> f64 {
                (self.0 - other).amax()
            }

            fn accumulate(&mut self, x: [f64; 4], y: [f64; 4], weight: f64) {
                for mu in 0..4 {
                    for nu in (mu + 1)..4 {
                        let v = weight * (x[mu] * y[nu] - x[nu] * y[mu]);
                        self.0[(mu, nu)] += v;
                        self.0[(nu, mu)] -= v;
                    }
                }
            }
        }

        impl std::ops::Add for $t {
            type Output = $t;

            fn add(self, rhs: $t) -> $t {
                Self(self.0 + rhs.0)
            }
        }
    };
}

antisymmetric_tensor!(OrbitalTensor);
antisymmetric_tensor!(MomentTensor);

pub fn orbital_tensor(particles: &[ChargedParticle]) -> OrbitalTensor {
    let mut l = OrbitalTensor::zero();
    for p in particles {
        l.accumulate(p.position, p.four_momentum(), 1.0);
    }
    l
}

/// Moment tensor of point charges: the delta functions collapse the spatial
/// integral to `M^μν = ½ Σ e (x^μ u^ν − x^ν u^μ) dτ/dt`.
pub fn moment_tensor(particles: &[ChargedParticle]) -> MomentTensor {
    let mut m = MomentTensor::zero();
    for p in particles {
        m.accumulate(p.position, p.four_velocity(), 0.5 * p.charge / p.lorentz_factor());
    }
    m
}

/// Moment tensor of a static loop sampled at `t = 0`. Only the spatial block
/// is populated; a closed neutral loop has no time components.
pub fn loop_moment_tensor(lp: &StaticCurrentLoop) -> MomentTensor {
    let mut m = MomentTensor::zero();
    for s in &lp.segments {
        let x = [0.0, s.midpoint[0], s.midpoint[1], s.midpoint[2]];
        let j = [0.0, s.current * s.dl[0], s.current * s.dl[1], s.current * s.dl[2]];
        m.accumulate(x, j, 0.5);
    }
    m
}

/// max |M^μν − (e/2m')L^μν| for a system with one common charge, rest mass
/// and speed (so that a single relativistic mass m' exists).
pub fn verify_moment_relation(particles: &[ChargedParticle]) -> Result<f64> {
    let first = particles
        .first()
        .ok_or_else(|| Error::IllPosedRelation("empty particle list".into()))?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
    for p in particles {
        if !close(p.charge, first.charge) {
            return Err(Error::IllPosedRelation(format!(
                "mixed charges {} and {}",
                first.charge, p.charge
            )));
        }
        if !close(p.rest_mass, first.rest_mass) {
            return Err(Error::IllPosedRelation(format!(
                "mixed rest masses {} and {}",
                first.rest_mass, p.rest_mass
            )));
        }
        if (p.speed() - first.speed()).abs() > 1e-12 {
            return Err(Error::IllPosedRelation(format!(
                "mixed speeds {} and {}",
                first.speed(),
                p.speed()
            )));
        }
    }
    let factor = first.charge / (2.0 * first.relativistic_mass());
    let l = orbital_tensor(particles);
    let m = moment_tensor(particles);
    Ok(m.max_abs_diff(&(l.matrix() * factor)))
}

/// `(M^23, M^31, M^12)`
pub fn magnetic_moment(m: &MomentTensor) -> [f64; 3] {
    [m.get(2, 3), m.get(3, 1), m.get(1, 2)]
}

/// `(M^01, M^02, M^03)`
pub fn electric_moment(m: &MomentTensor) -> [f64; 3] {
    [m.get(0, 1), m.get(0, 2), m.get(0, 3)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultipoleOrder {
    Monopole,
    Dipole,
}

#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Particles(&'a ParticleSystem),
    Loop(&'a StaticCurrentLoop),
}

impl Source<'_> {
    pub fn radius(&self) -> f64 {
        match self {
            Source::Particles(s) => s.source_radius(),
            Source::Loop(l) => l.source_radius(),
        }
    }

    /// `∫ J^μ d³x`
    fn total_current(&self) -> [f64; 4] {
        match self {
            Source::Particles(s) => s
                .iter()
                .fold([0.0; 4], |acc, p| add4(acc, p.current_weight())),
            Source::Loop(l) => {
                let j = l
                    .segments
                    .iter()
                    .fold([0.0; 3], |acc, s| add3(acc, scale3(s.dl, s.current)));
                [0.0, j[0], j[1], j[2]]
            }
        }
    }

    fn moment(&self) -> (MomentTensor, f64) {
        match self {
            Source::Particles(s) => (moment_tensor(s), s.common_time()),
            Source::Loop(l) => (loop_moment_tensor(l), 0.0),
        }
    }
}

/// Static multipole expansion of `A^μ` about the origin, truncated at the
/// given order. The dipole term is expressed through the moment tensor:
/// `∫ x^i J^k = M^ik` for the divergence-free spatial current and
/// `∫ x^i J^0 = 2 M^i0 + t ∫ J^i` for the charge density.
pub fn multipole_potential(
    source: Source<'_>,
    field_point: [f64; 3],
    order: MultipoleOrder,
) -> Result<[f64; 4]> {
    let r = norm3(field_point);
    let limit = 3.0 * source.radius();
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(r > limit) || r == 0.0 {
        return Err(Error::FieldPointTooClose { distance: r, limit });
    }
    let q = source.total_current();
    let mut a = q.map(|qm| qm / (FOUR_PI * r));
    if order == MultipoleOrder::Dipole {
        let (m, t) = source.moment();
        let r3 = FOUR_PI * r * r * r;
        let mut charge_dipole = 0.0;
        for i in 1..4 {
            charge_dipole += field_point[i - 1] * (2.0 * m.get(i, 0) + t * q[i]);
        }
        a[0] += charge_dipole / r3;
        for k in 1..4 {
            let mut s = 0.0;
            for i in 1..4 {
                s += field_point[i - 1] * m.get(i, k);
            }
            a[k] += s / r3;
        }
    }
    Ok(a)
}

/// Direct Coulomb-type superposition `A^μ(x) = (1/4π) Σ J^μ / |x − x'|`, with
/// straight segments integrated in closed form.
pub fn exact_potential_oracle(source: Source<'_>, field_point: [f64; 3]) -> Result<[f64; 4]> {
    let mut a = [0.0; 4];
    match source {
        Source::Particles(s) => {
            for p in s.iter() {
                let d = norm3(sub3(field_point, p.spatial_position()));
                if d <= 1e-12 * (1.0 + norm3(field_point)) {
                    return Err(Error::CoincidentPoint);
                }
                a = add4(a, p.current_weight().map(|j| j / (FOUR_PI * d)));
            }
        }
        Source::Loop(l) => {
            for s in &l.segments {
                let w = inverse_distance_line_integral(s, field_point)?;
                for k in 0..3 {
                    a[k + 1] += s.current * s.dl[k] / norm3(s.dl) * w / FOUR_PI;
                }
            }
        }
    }
    Ok(a)
}

/// `∫ dl / |x − p(l)|` along a straight segment.
fn inverse_distance_line_integral(s: &Segment, x: [f64; 3]) -> Result<f64> {
    let length = norm3(s.dl);
    if length == 0.0 {
        return Ok(0.0);
    }
    let u = scale3(s.dl, 1.0 / length);
    let d = sub3(x, s.start());
    let b = dot3(d, u);
    let ra = norm3(d);
    let rb = norm3(sub3(x, s.end()));
    let perp = (ra * ra - b * b).max(0.0).sqrt();
    if perp <= 1e-12 * length && (-1e-12 * length..=length * (1.0 + 1e-12)).contains(&b) {
        return Err(Error::CoincidentPoint);
    }
    // Two algebraically equal forms; pick the one without cancellation.
    let value = if b < 0.5 * length {
        ((rb + length - b) / (ra - b)).ln()
    } else {
        ((ra + b) / (rb - length + b)).ln()
    };
    Ok(value)
}

/// `max_ij |Σ (x_i J_j + x_j J_i) dl|` over the spatial indices, relative to
/// `Σ |J| |x| dl`. Vanishes for a divergence-free (closed) current.
pub fn check_antisymmetry_identity(lp: &StaticCurrentLoop) -> f64 {
    let mut sym = [[0.0_f64; 3]; 3];
    let mut scale = 0.0;
    for s in &lp.segments {
        let j = scale3(s.dl, s.current);
        scale += norm3(j) * norm3(s.midpoint);
        for i in 0..3 {
            for k in 0..3 {
                sym[i][k] += s.midpoint[i] * j[k] + s.midpoint[k] * j[i];
            }
        }
    }
    let worst = sym.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add4(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{finite_vector_boost, RapidityVector};

    fn particle(m: f64, e: f64, x: [f64; 4], v: [f64; 3]) -> ChargedParticle {
        ChargedParticle::new(m, e, x, v).unwrap()
    }

    #[test]
    fn particle_validation() {
        assert!(ChargedParticle::new(0.0, 1.0, [0.0; 4], [0.0; 3]).is_err());
        assert!(ChargedParticle::new(1.0, 1.0, [0.0; 4], [0.6, 0.8, 0.0]).is_err());
        assert!(ChargedParticle::new(1.0, f64::NAN, [0.0; 4], [0.0; 3]).is_err());
        let p = particle(2.0, 1.0, [0.0; 4], [0.3, -0.4, 0.5]);
        let u = p.four_velocity();
        let norm = u[0] * u[0] - u[1] * u[1] - u[2] * u[2] - u[3] * u[3];
        assert!((norm - 1.0).abs() < 1e-12);
        assert!((p.relativistic_mass() - 2.0 * p.lorentz_factor()).abs() < 1e-15);
    }

    #[test]
    fn system_requires_common_time() {
        assert!(ParticleSystem::new(vec![]).is_err());
        let a = particle(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0; 3]);
        let b = particle(1.0, 1.0, [0.5, 1.0, 0.0, 0.0], [0.0; 3]);
        assert!(ParticleSystem::new(vec![a, b]).is_err());
    }

    #[test]
    fn orbital_tensor_examples() {
        let m = 1.7;
        let at_x = particle(m, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0; 3]);
        let l = orbital_tensor(&[at_x]);
        assert!((l.get(0, 1) + m).abs() < 1e-15);
        assert_eq!(l.get(1, 2), 0.0);
        assert_eq!(l.get(2, 3), 0.0);
        assert_eq!(l.get(1, 3), 0.0);

        // x = r x̂, p = p ŷ: L^12 = x p_y
        let (r, v) = (2.0, 0.6);
        let moving = particle(m, 1.0, [0.0, r, 0.0, 0.0], [0.0, v, 0.0]);
        let p = moving.four_momentum()[2];
        assert!((orbital_tensor(&[moving]).get(1, 2) - r * p).abs() < 1e-14);
        assert_eq!(orbital_tensor(&[moving]).antisymmetry_residual(), 0.0);
    }

    #[test]
    fn static_charge_at_origin_has_no_moment() {
        let p = particle(1.0, 1.0, [0.0; 4], [0.0; 3]);
        assert_eq!(moment_tensor(&[p]).matrix().amax(), 0.0);
    }

    #[test]
    fn single_particle_moment_relation() {
        let p = particle(0.8, -1.3, [0.4, 1.0, -2.0, 0.5], [0.1, 0.5, -0.7]);
        let m = moment_tensor(&[p]);
        let l = orbital_tensor(&[p]);
        let expected = l.matrix() * (p.charge() / (2.0 * p.relativistic_mass()));
        assert!(m.max_abs_diff(&expected) < 1e-12);
        assert!(verify_moment_relation(&[p]).unwrap() < 1e-12);
        assert_eq!(m.antisymmetry_residual(), 0.0);
    }

    #[test]
    fn mirrored_pair_relation() {
        let a = particle(1.0, 1.0, [0.0, 1.0, 0.5, 0.0], [0.3, -0.2, 0.1]);
        let b = particle(1.0, 1.0, [0.0, -1.0, -0.5, 0.0], [-0.3, 0.2, -0.1]);
        assert!(verify_moment_relation(&[a, b]).unwrap() < 1e-12);
    }

    #[test]
    fn relation_rejects_heterogeneous_systems() {
        let a = particle(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.3, 0.0, 0.0]);
        let slow = particle(1.0, 1.0, [0.0, -1.0, 0.0, 0.0], [0.1, 0.0, 0.0]);
        let other_charge = particle(1.0, 2.0, [0.0, -1.0, 0.0, 0.0], [0.0, 0.3, 0.0]);
        assert!(matches!(verify_moment_relation(&[a, slow]), Err(Error::IllPosedRelation(_))));
        assert!(matches!(
            verify_moment_relation(&[a, other_charge]),
            Err(Error::IllPosedRelation(_))
        ));
    }

    #[test]
    fn circulating_charge_magnetic_moment() {
        let (e, r, v) = (1.0, 0.5, 0.8);
        let p = particle(1.0, e, [0.0, r, 0.0, 0.0], [0.0, v, 0.0]);
        let mu = magnetic_moment(&moment_tensor(&[p]));
        assert!((mu[2] - 0.5 * e * v * r).abs() < 1e-15);
        assert_eq!(mu[0], 0.0);
        let reversed = particle(1.0, e, [0.0, r, 0.0, 0.0], [0.0, -v, 0.0]);
        let mu_rev = magnetic_moment(&moment_tensor(&[reversed]));
        assert!((mu_rev[2] + mu[2]).abs() < 1e-15);
        assert_eq!(magnetic_moment(&MomentTensor::zero()), [0.0; 3]);
    }

    #[test]
    fn static_charge_electric_moment() {
        let (e, d) = (1.5, 0.3);
        let p = particle(1.0, e, [0.0, d, 0.0, 0.0], [0.0; 3]);
        let p_e = electric_moment(&moment_tensor(&[p]));
        assert!((p_e[0] + 0.5 * e * d).abs() < 1e-15);
        assert_eq!(electric_moment(&MomentTensor::zero()), [0.0; 3]);
    }

    #[test]
    fn boost_mixes_moments() {
        let a = particle(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0; 3]);
        let b = particle(1.0, 1.0, [0.0, -1.0, 0.0, 0.0], [0.0; 3]);
        let pair = ParticleSystem::new(vec![a, b]).unwrap();
        let m = moment_tensor(&pair);
        assert_eq!(magnetic_moment(&m), [0.0; 3]);
        assert_eq!(electric_moment(&m), [0.0; 3]);

        // A circulating pair is a pure magnetic source.
        let c1 = particle(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0, 0.5, 0.0]);
        let c2 = particle(1.0, 1.0, [0.0, -1.0, 0.0, 0.0], [0.0, -0.5, 0.0]);
        let ring = ParticleSystem::new(vec![c1, c2]).unwrap();
        let before = moment_tensor(&ring);
        assert!(electric_moment(&before).iter().all(|x| x.abs() < 1e-15));
        assert!(magnetic_moment(&before)[2] > 0.0);

        let lambda = finite_vector_boost(&RapidityVector::new([0.6, 0.0, 0.0]).unwrap());
        let after = moment_tensor(&ring.transformed(&lambda));
        let e_after = electric_moment(&after);
        assert!(e_after.iter().map(|x| x.abs()).fold(0.0, f64::max) > 1e-3);
    }

    #[test]
    fn tensors_are_additive() {
        let a = ParticleSystem::new(vec![particle(1.0, 1.0, [0.2, 1.0, 0.0, 0.3], [0.1, 0.2, 0.3])]).unwrap();
        let b = ParticleSystem::new(vec![particle(2.0, -1.0, [0.2, 0.0, 1.0, -0.3], [-0.4, 0.0, 0.3])]).unwrap();
        let ab = a.union(&b).unwrap();
        let lsum = orbital_tensor(&a) + orbital_tensor(&b);
        assert!(orbital_tensor(&ab).max_abs_diff(lsum.matrix()) < 1e-14);
        let msum = moment_tensor(&a) + moment_tensor(&b);
        assert!(moment_tensor(&ab).max_abs_diff(msum.matrix()) < 1e-14);
    }

    #[test]
    fn monopole_of_static_charge() {
        let e = 2.0;
        let sys = ParticleSystem::new(vec![particle(1.0, e, [0.0; 4], [0.0; 3])]).unwrap();
        let x = [3.0, -1.0, 2.0];
        let r = norm3(x);
        let mono = multipole_potential(Source::Particles(&sys), x, MultipoleOrder::Monopole).unwrap();
        let dip = multipole_potential(Source::Particles(&sys), x, MultipoleOrder::Dipole).unwrap();
        let exact = exact_potential_oracle(Source::Particles(&sys), x).unwrap();
        assert!((mono[0] - e / (FOUR_PI * r)).abs() < 1e-15);
        assert_eq!(&mono[1..], &[0.0; 3]);
        assert_eq!(mono, dip);
        assert!((exact[0] - e / (FOUR_PI * r)).abs() < 1e-15);
    }

    #[test]
    fn field_point_must_be_far() {
        let sys = ParticleSystem::new(vec![particle(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0; 3])]).unwrap();
        assert!(matches!(
            multipole_potential(Source::Particles(&sys), [2.0, 0.0, 0.0], MultipoleOrder::Dipole),
            Err(Error::FieldPointTooClose { .. })
        ));
        assert!(matches!(
            exact_potential_oracle(Source::Particles(&sys), [1.0, 0.0, 0.0]),
            Err(Error::CoincidentPoint)
        ));
        let lp = StaticCurrentLoop::square(1.0, 1.0, 1);
        assert!(matches!(
            exact_potential_oracle(Source::Loop(&lp), [0.5, 0.1, 0.0]),
            Err(Error::CoincidentPoint)
        ));
    }

    #[test]
    fn oracle_is_linear() {
        let a = ParticleSystem::new(vec![particle(1.0, 1.0, [0.0, 0.1, 0.0, 0.0], [0.2, 0.0, 0.0])]).unwrap();
        let b = ParticleSystem::new(vec![particle(1.0, -0.5, [0.0, 0.0, 0.3, 0.1], [0.0, 0.0, -0.4])]).unwrap();
        let x = [1.0, 2.0, -0.5];
        let sum = add4(
            exact_potential_oracle(Source::Particles(&a), x).unwrap(),
            exact_potential_oracle(Source::Particles(&b), x).unwrap(),
        );
        let joint = exact_potential_oracle(Source::Particles(&a.union(&b).unwrap()), x).unwrap();
        for k in 0..4 {
            assert!((sum[k] - joint[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn segment_integral_matches_quadrature() {
        let s = Segment {
            midpoint: [0.3, -0.2, 0.1],
            dl: [0.4, 0.5, -0.2],
            current: 1.0,
        };
        for x in [[2.0, 1.0, 0.5], [0.3 + 0.4, -0.2 + 0.5, 0.1 - 0.2], [-1.0, -1.5, 0.6]] {
            let x = add3(x, [0.0, 0.0, 0.05]);
            let n = 20_000;
            let len = norm3(s.dl);
            let mut q = 0.0;
            for k in 0..n {
                let t = (k as f64 + 0.5) / n as f64 - 0.5;
                q += len / n as f64 / norm3(sub3(x, add3(s.midpoint, scale3(s.dl, t))));
            }
            let exact = inverse_distance_line_integral(&s, x).unwrap();
            assert!((exact - q).abs() < 1e-6 * q, "{exact} vs {q}");
        }
    }

    #[test]
    fn antisymmetry_identity_for_closed_and_open_paths() {
        let square = StaticCurrentLoop::square(1.0, 2.0, 1);
        assert!(square.closure_residual() < 1e-15);
        assert!(check_antisymmetry_identity(&square) < 1e-10);
        let open = square.without_segment(0);
        assert!(check_antisymmetry_identity(&open) > 0.1);
        for n in [36, 360, 3600] {
            assert!(check_antisymmetry_identity(&StaticCurrentLoop::circle(1.0, 1.0, n)) < 1e-3);
        }
    }

    #[test]
    fn loop_magnetic_moment_is_current_times_area() {
        let (a, current) = (0.7, 1.3);
        let lp = StaticCurrentLoop::square(a, current, 3);
        let mu = magnetic_moment(&loop_moment_tensor(&lp));
        assert!((mu[2] - current * a * a).abs() < 1e-14);
        assert!(mu[0].abs() < 1e-15 && mu[1].abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_and_header_check() {
        let text = "mass,charge,t,x,y,z,vx,vy,vz\n1,1,0,1,0,0,0,0.5,0\n1,1,0,-1,0,0,0,-0.5,0\n";
        let sys = ParticleSystem::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[1].velocity(), [0.0, -0.5, 0.0]);

        let swapped = "charge,mass,t,x,y,z,vx,vy,vz\n1,1,0,1,0,0,0,0.5,0\n";
        assert!(matches!(
            ParticleSystem::from_csv_reader(swapped.as_bytes()),
            Err(Error::Parse { .. })
        ));
        let bad = "mass,charge,t,x,y,z,vx,vy,vz\n1,1,0,one,0,0,0,0.5,0\n";
        assert!(ParticleSystem::from_csv_reader(bad.as_bytes()).is_err());

        let loop_text = "x,y,z,dlx,dly,dlz,current\n0.5,0,0,0,1,0,1\n0,0.5,0,-1,0,0,1\n-0.5,0,0,0,-1,0,1\n0,-0.5,0,1,0,0,1\n";
        let lp = StaticCurrentLoop::from_csv_reader(loop_text.as_bytes()).unwrap();
        assert_eq!(lp.segments().len(), 4);
        assert!(lp.closure_residual() < 1e-15);
    }
}
