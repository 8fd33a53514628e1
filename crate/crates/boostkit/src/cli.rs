//! Scenario files, their dispatch to the physics modules, and batch runs.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! { "kind": "splitting",
//!   "parameters": { "e_field": [0, 0, 0.001] },
//!   "tolerances": { "splitting": 1e-10 },
//!   "output": "reports/splitting.json" }
//! ```
//!
//! `parameters`, `tolerances` and `output` are optional. Relative paths are
//! resolved against the scenario's directory; the default report location is
//! `reports/<stem>.json` next to the scenario.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::clifford::{
    block_form_residual, check_lorentz_algebra, covariance_residual, finite_spinor_boost, finite_vector_boost,
    make_gamma, spin_tensor, RapidityVector,
};
use crate::dirac_grid::{
    build_dirac_1d, free_dispersion_check, nonrel_limit_compare, second_order_operator, spectrum_rows, square_well,
    write_spectrum_file, Grid1D,
};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::moments::{
    check_antisymmetry_identity, electric_moment, exact_potential_oracle, loop_moment_tensor, magnetic_moment,
    moment_tensor, multipole_potential, orbital_tensor, verify_moment_relation, ChargedParticle, MultipoleOrder,
    ParticleSystem, Source, StaticCurrentLoop,
};
use crate::pauli::{
    build_full_pauli, check_commutation, splitting_spectrum, transform_to_pm, FieldConfig, PlaneWaveBasis,
    ScalarPotential, VectorPotential,
};
use crate::report::{float, Quantity, Report, Residual, Status};

/// Environment variable that seeds randomized sampling.
pub const SEED_ENV: &str = "BOOSTKIT_SEED";
const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    AlgebraCheck,
    Moments,
    Splitting,
    Dirac1d,
    CompareNonrel,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::AlgebraCheck => "algebra-check",
            Kind::Moments => "moments",
            Kind::Splitting => "splitting",
            Kind::Dirac1d => "dirac1d",
            Kind::CompareNonrel => "compare-nonrel",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "algebra-check" => Kind::AlgebraCheck,
            "moments" => Kind::Moments,
            "splitting" => Kind::Splitting,
            "dirac1d" => Kind::Dirac1d,
            "compare-nonrel" => Kind::CompareNonrel,
            other => {
                return Err(Error::InvalidScenario(format!(
                    "unknown kind `{other}` (expected algebra-check, moments, splitting, dirac1d or compare-nonrel)"
                )))
            }
        })
    }

    /// Named tolerances and their defaults.
    pub fn default_tolerances(&self) -> &'static [(&'static str, f64)] {
        match self {
            Kind::AlgebraCheck => &[
                ("clifford", 1e-12),
                ("hermiticity", 1e-12),
                ("lorentz_algebra", 1e-12),
                ("block_forms", 1e-12),
                ("covariance", 1e-9),
            ],
            Kind::Moments => &[("moment_relation", 1e-12), ("antisymmetry", 1e-12), ("multipole", 0.015)],
            Kind::Splitting => &[("splitting", 1e-10), ("block_diagonal", 1e-12), ("commutation", 1e-12)],
            Kind::Dirac1d => &[
                ("hermiticity", 1e-12),
                ("lattice_dispersion", 1e-10),
                ("continuum", 0.005),
                ("second_order", 1e-9),
            ],
            Kind::CompareNonrel => &[("discrepancy", 0.02), ("ratio_lower", 0.35), ("ratio_upper", 0.65)],
        }
    }
}

#[derive(Debug, Clone)]
pub enum MomentSource {
    Particles(ParticleSystem),
    Loop(StaticCurrentLoop),
}

/// Fully validated work item for one scenario.
#[derive(Debug, Clone)]
pub enum Job {
    AlgebraCheck {
        representation: String,
        samples: usize,
        max_rapidity: f64,
        seed: u64,
    },
    Moments {
        source: MomentSource,
        field_points: Vec<[f64; 3]>,
    },
    Splitting {
        cfg: FieldConfig,
        basis: PlaneWaveBasis,
        hermitian_tolerance: f64,
    },
    Dirac1d {
        grid: Grid1D,
        cfg: FieldConfig,
        wilson_r: f64,
        ka_max: f64,
    },
    CompareNonrel {
        depth: f64,
        width: f64,
        mass: f64,
        grid: Grid1D,
        wilson_r: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub source_path: PathBuf,
    pub kind: Kind,
    pub parameters: Map<String, Value>,
    pub tolerances: Vec<(String, f64)>,
    pub output_path: PathBuf,
    pub job: Job,
}

impl Scenario {
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .expect("tolerance names come from the kind's defaults")
    }

    fn echo(&self) -> Value {
        let mut m = Map::new();
        let file = self
            .source_path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        m.insert("file".into(), Value::String(file));
        m.insert("kind".into(), Value::String(self.kind.as_str().into()));
        m.insert("parameters".into(), Value::Object(self.parameters.clone()));
        let tol = self.tolerances.iter().map(|(k, v)| (k.clone(), float(*v))).collect();
        m.insert("tolerances".into(), Value::Object(tol));
        Value::Object(m)
    }
}

struct Params<'a> {
    map: &'a Map<String, Value>,
    kind: Kind,
}

impl Params<'_> {
    fn missing(&self, key: &str) -> Error {
        Error::InvalidScenario(format!("missing key `parameters.{key}` (required for kind `{}`)", self.kind.as_str()))
    }

    fn wrong(&self, key: &str, what: &str) -> Error {
        Error::InvalidScenario(format!("parameter `{key}` must be {what}"))
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.map.get(key)
    }

    fn number(&self, key: &str, v: &Value) -> Result<f64> {
        v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| self.wrong(key, "a finite number"))
    }

    fn f64_req(&self, key: &str) -> Result<f64> {
        let v = self.get(key).ok_or_else(|| self.missing(key))?;
        self.number(key, v)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        self.get(key).map_or(Ok(default), |v| self.number(key, v))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| self.wrong(key, "a non-negative integer")),
        }
    }

    fn vec_of(&self, key: &str, v: &Value, len: usize) -> Result<Vec<f64>> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == len)
            .ok_or_else(|| self.wrong(key, &format!("an array of {len} numbers")))?;
        arr.iter().map(|x| self.number(key, x)).collect()
    }

    fn vec3_or(&self, key: &str, default: [f64; 3]) -> Result<[f64; 3]> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => {
                let x = self.vec_of(key, v, 3)?;
                Ok([x[0], x[1], x[2]])
            }
        }
    }

    fn str_or<'s>(&'s self, key: &str, default: &'s str) -> Result<&'s str> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.as_str().ok_or_else(|| self.wrong(key, "a string")),
        }
    }

    fn object(&self, key: &str) -> Result<Option<Params<'_>>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Object(map)) => Ok(Some(Params { map, kind: self.kind })),
            Some(_) => Err(self.wrong(key, "an object")),
        }
    }

    fn grid(&self) -> Result<Grid1D> {
        let n = self.usize_or("n_points", 256)?;
        let grid = match (self.get("spacing"), self.get("length")) {
            (Some(_), Some(_)) => return Err(Error::InvalidScenario("give either `spacing` or `length`, not both".into())),
            (_, Some(_)) => Grid1D::with_length(n, self.f64_req("length")?),
            _ => Grid1D::new(n, self.f64_or("spacing", 0.1)?),
        };
        grid.map_err(invalid)
    }
}

fn invalid(e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::InvalidScenario(_) => e,
        other => Error::InvalidScenario(other.to_string()),
    }
}

fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidScenario(format!("{SEED_ENV}=`{s}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn parse_particle(p: &Params<'_>, v: &Value) -> Result<ChargedParticle> {
    let map = v
        .as_object()
        .ok_or_else(|| Error::InvalidScenario("each entry of `particles` must be an object".into()))?;
    let q = Params { map, kind: p.kind };
    let position = q.get("position").ok_or_else(|| q.missing("particles[].position"))?;
    let position = q.vec_of("position", position, 4)?;
    let velocity = q.vec3_or("velocity", [0.0; 3])?;
    ChargedParticle::new(
        q.f64_req("mass")?,
        q.f64_req("charge")?,
        [position[0], position[1], position[2], position[3]],
        velocity,
    )
    .map_err(invalid)
}

fn moment_source(p: &Params<'_>, base: &Path) -> Result<MomentSource> {
    if let Some(v) = p.get("particles") {
        let list = v.as_array().ok_or_else(|| p.wrong("particles", "an array"))?;
        let parts = list.iter().map(|x| parse_particle(p, x)).collect::<Result<Vec<_>>>()?;
        return ParticleSystem::new(parts).map(MomentSource::Particles).map_err(invalid);
    }
    if p.get("particles_file").is_some() {
        let file = base.join(p.str_or("particles_file", "")?);
        return ParticleSystem::from_csv_path(&file).map(MomentSource::Particles).map_err(invalid);
    }
    if p.get("loop_file").is_some() {
        let file = base.join(p.str_or("loop_file", "")?);
        return StaticCurrentLoop::from_csv_path(&file).map(MomentSource::Loop).map_err(invalid);
    }
    if let Some(lp) = p.object("loop")? {
        let current = lp.f64_or("current", 1.0)?;
        let segments = lp.usize_or("segments_per_side", 16)?;
        return match lp.str_or("shape", "square")? {
            "square" => Ok(MomentSource::Loop(StaticCurrentLoop::square(lp.f64_req("side")?, current, segments.max(1)))),
            "circle" => Ok(MomentSource::Loop(StaticCurrentLoop::circle(
                lp.f64_req("radius")?,
                current,
                lp.usize_or("segments", 64)?.max(3),
            ))),
            other => Err(Error::InvalidScenario(format!("unknown loop shape `{other}` (square or circle)"))),
        };
    }
    Err(Error::InvalidScenario(
        "missing key `parameters.particles` (or particles_file, loop, loop_file) for kind `moments`".into(),
    ))
}

fn field_config(p: &Params<'_>) -> Result<FieldConfig> {
    let cfg = FieldConfig::free(p.f64_or("charge", 1.0)?, p.f64_or("mass", 1.0)?)
        .with_e_field(p.vec3_or("e_field", [0.0; 3])?)
        .with_b_field(p.vec3_or("b_field", [0.0; 3])?)
        .with_scalar_potential(ScalarPotential::Constant(p.f64_or("scalar_potential", 0.0)?))
        .with_vector_potential(VectorPotential::Constant(p.vec3_or("vector_potential", [0.0; 3])?));
    cfg.validate().map_err(invalid)?;
    Ok(cfg)
}

fn build_job(kind: Kind, p: &Params<'_>, base: &Path) -> Result<Job> {
    Ok(match kind {
        Kind::AlgebraCheck => Job::AlgebraCheck {
            representation: p.str_or("representation", "dirac")?.to_string(),
            samples: p.usize_or("samples", 100)?,
            max_rapidity: p.f64_or("max_rapidity", 2.0)?,
            seed: match p.get("seed") {
                Some(v) => v.as_u64().ok_or_else(|| p.wrong("seed", "a non-negative integer"))?,
                None => seed_from_env()?,
            },
        },
        Kind::Moments => {
            let source = moment_source(p, base)?;
            let field_points = match p.get("field_points") {
                None => Vec::new(),
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| p.wrong("field_points", "an array of 3-vectors"))?
                    .iter()
                    .map(|x| p.vec_of("field_points", x, 3).map(|x| [x[0], x[1], x[2]]))
                    .collect::<Result<_>>()?,
            };
            Job::Moments { source, field_points }
        }
        Kind::Splitting => {
            let cfg = field_config(p)?;
            let basis = PlaneWaveBasis::new(
                p.f64_or("box_length", 2.0 * std::f64::consts::PI)?,
                p.usize_or("modes_per_axis", 3)?,
            )
            .map_err(invalid)?;
            Job::Splitting {
                cfg,
                basis,
                hermitian_tolerance: p.f64_or("hermitian_tolerance", 1e-12)?,
            }
        }
        Kind::Dirac1d => {
            let grid = p.grid()?;
            let mut cfg = FieldConfig::free(p.f64_or("charge", 1.0)?, p.f64_or("mass", 1.0)?);
            if let Some(well) = p.object("square_well")? {
                let depth = well.f64_req("depth")?;
                let width = well.f64_req("width")?;
                let charge = cfg.charge;
                cfg = cfg.with_scalar_potential(ScalarPotential::Sampled(
                    square_well(&grid, depth, width).into_iter().map(|v| v / charge).collect(),
                ));
            } else {
                cfg = cfg.with_scalar_potential(ScalarPotential::Constant(p.f64_or("scalar_potential", 0.0)?));
            }
            cfg = cfg.with_vector_potential(VectorPotential::Constant([p.f64_or("vector_potential_x", 0.0)?, 0.0, 0.0]));
            cfg.validate().map_err(invalid)?;
            let wilson_r = p.f64_or("wilson_r", 1.0)?;
            if !(wilson_r > 0.0 && wilson_r <= 1.0) {
                return Err(invalid(Error::InvalidWilson(wilson_r)));
            }
            Job::Dirac1d {
                grid,
                cfg,
                wilson_r,
                ka_max: p.f64_or("ka_max", 0.3)?,
            }
        }
        Kind::CompareNonrel => Job::CompareNonrel {
            depth: p.f64_req("well_depth")?,
            width: p.f64_req("well_width")?,
            mass: p.f64_or("mass", 1.0)?,
            grid: p.grid()?,
            wilson_r: p.f64_or("wilson_r", 0.01)?,
        },
    })
}

/// Read and validate a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidScenario("scenario must be a JSON object".into()))?;
    let kind = obj
        .get("kind")
        .ok_or_else(|| Error::InvalidScenario("missing key `kind`".into()))?
        .as_str()
        .ok_or_else(|| Error::InvalidScenario("`kind` must be a string".into()))?;
    let kind = Kind::parse(kind)?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "kind" | "parameters" | "tolerances" | "output") {
            return Err(Error::InvalidScenario(format!("unknown top-level key `{key}`")));
        }
    }
    let empty = Map::new();
    let parameters = match obj.get("parameters") {
        None => &empty,
        Some(Value::Object(m)) => m,
        Some(_) => return Err(Error::InvalidScenario("`parameters` must be an object".into())),
    };

    let mut tolerances: Vec<(String, f64)> = kind
        .default_tolerances()
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    match obj.get("tolerances") {
        None => {}
        Some(Value::Object(m)) => {
            for (k, v) in m {
                let slot = tolerances.iter_mut().find(|(n, _)| n == k).ok_or_else(|| {
                    Error::InvalidScenario(format!("unknown tolerance `{k}` for kind `{}`", kind.as_str()))
                })?;
                let x = v
                    .as_f64()
                    .filter(|x| x.is_finite() && *x > 0.0)
                    .ok_or_else(|| Error::InvalidScenario(format!("tolerance `{k}` must be a positive number")))?;
                slot.1 = x;
            }
        }
        Some(_) => return Err(Error::InvalidScenario("`tolerances` must be an object".into())),
    }

    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let output_path = match obj.get("output") {
        None => {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
            base.join("reports").join(format!("{stem}.json"))
        }
        Some(Value::String(s)) => base.join(s),
        Some(_) => return Err(Error::InvalidScenario("`output` must be a path string".into())),
    };
    let params = Params { map: parameters, kind };
    let job = build_job(kind, &params, &base)?;
    Ok(Scenario {
        source_path: path.to_path_buf(),
        kind,
        parameters: parameters.clone(),
        tolerances,
        output_path,
        job,
    })
}

fn matrix_rows(m: &nalgebra::Matrix4<f64>) -> Vec<Vec<f64>> {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
}

fn spectrum_path(report_path: &Path) -> PathBuf {
    let stem = report_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    report_path.with_file_name(format!("{stem}.spectrum.csv"))
}

fn relative_error(approx: [f64; 4], exact: [f64; 4]) -> f64 {
    let diff: f64 = (0..4).map(|i| (approx[i] - exact[i]).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = exact.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / norm
}

fn execute(s: &Scenario, report: &mut Report) -> Result<()> {
    match &s.job {
        Job::AlgebraCheck {
            representation,
            samples,
            max_rapidity,
            seed,
        } => {
            let gammas = make_gamma(representation)?;
            let st = spin_tensor(&gammas);
            let algebra = check_lorentz_algebra(&st);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut covariance = 0.0_f64;
            for _ in 0..*samples {
                let eta = random_rapidity(&mut rng, *max_rapidity);
                let r = covariance_residual(&gammas, &finite_spinor_boost(&st, &eta), &finite_vector_boost(&eta));
                covariance = covariance.max(r);
            }
            report
                .result("representation", Quantity::Text(gammas.representation().to_string()))
                .result("seed", Quantity::Integer(*seed as i64))
                .result("samples", Quantity::Integer(*samples as i64))
                .result("worst_algebra_indices", Quantity::Vector(algebra.worst_indices.map(|i| i as f64).to_vec()));
            report
                .residual(Residual::below("clifford", gammas.clifford_residual(), s.tolerance("clifford")))
                .residual(Residual::below("hermiticity", gammas.hermiticity_residual(), s.tolerance("hermiticity")))
                .residual(Residual::below("lorentz_algebra", algebra.max_residual, s.tolerance("lorentz_algebra")))
                .residual(Residual::below("block_forms", block_form_residual(&st), s.tolerance("block_forms")))
                .residual(Residual::below("covariance", covariance, s.tolerance("covariance")));
        }
        Job::Moments { source, field_points } => {
            let src = match source {
                MomentSource::Particles(sys) => {
                    let m = moment_tensor(sys);
                    report
                        .result("particle_count", Quantity::Integer(sys.len() as i64))
                        .result("orbital_tensor", Quantity::Matrix(matrix_rows(orbital_tensor(sys).matrix())))
                        .result("moment_tensor", Quantity::Matrix(matrix_rows(m.matrix())))
                        .result("magnetic_moment", Quantity::Vector(magnetic_moment(&m).to_vec()))
                        .result("electric_moment", Quantity::Vector(electric_moment(&m).to_vec()));
                    report.residual(Residual::below("antisymmetry", m.antisymmetry_residual(), s.tolerance("antisymmetry")));
                    match verify_moment_relation(sys) {
                        Ok(r) => {
                            report.residual(Residual::below("moment_relation", r, s.tolerance("moment_relation")));
                        }
                        Err(Error::IllPosedRelation(why)) => {
                            report.result("moment_relation", Quantity::Text(format!("not applicable: {why}")));
                        }
                        Err(e) => return Err(e),
                    }
                    Source::Particles(sys)
                }
                MomentSource::Loop(lp) => {
                    let m = loop_moment_tensor(lp);
                    report
                        .result("segment_count", Quantity::Integer(lp.segments().len() as i64))
                        .result("moment_tensor", Quantity::Matrix(matrix_rows(m.matrix())))
                        .result("magnetic_moment", Quantity::Vector(magnetic_moment(&m).to_vec()))
                        .result("closure_residual", Quantity::Real(lp.closure_residual()));
                    report.residual(Residual::below("antisymmetry", check_antisymmetry_identity(lp), s.tolerance("antisymmetry")));
                    Source::Loop(lp)
                }
            };
            let mut worst = 0.0_f64;
            for (i, x) in field_points.iter().enumerate() {
                let approx = multipole_potential(src, *x, MultipoleOrder::Dipole)?;
                let exact = exact_potential_oracle(src, *x)?;
                let err = relative_error(approx, exact);
                worst = worst.max(err);
                report
                    .result(format!("potential[{i}].multipole"), Quantity::Vector(approx.to_vec()))
                    .result(format!("potential[{i}].exact"), Quantity::Vector(exact.to_vec()))
                    .result(format!("potential[{i}].relative_error"), Quantity::Real(err));
            }
            if !field_points.is_empty() {
                report.residual(Residual::below("multipole", worst, s.tolerance("multipole")));
            }
        }
        Job::Splitting {
            cfg,
            basis,
            hermitian_tolerance,
        } => {
            let spectrum = splitting_spectrum(cfg, basis, *hermitian_tolerance)?;
            let expected = (cfg.charge / cfg.mass).abs() * norm3(cfg.e_field);
            let (lo, hi) = spectrum.splitting_range();
            let off_block = transform_to_pm(&build_full_pauli(cfg, basis)?)?.off_block_residual();
            report
                .result("dimension", Quantity::Integer(basis.dimension() as i64))
                .result("splitting", Quantity::Complex(spectrum.splitting))
                .result("splitting_magnitude", Quantity::Real(spectrum.splitting_magnitude))
                .result("expected_magnitude", Quantity::Real(expected))
                .result("ground_epsilon0", Quantity::Complex(spectrum.pairs[0].epsilon0))
                .result("ground_epsilon1", Quantity::Complex(spectrum.pairs[0].epsilon1))
                .result(
                    "real_eigenvalues",
                    Quantity::Integer(spectrum.real_flags.iter().filter(|r| **r).count() as i64),
                );
            report
                .residual(Residual::below(
                    "splitting",
                    (hi - expected).abs().max((lo - expected).abs()),
                    s.tolerance("splitting"),
                ))
                .residual(Residual::below("block_diagonal", off_block, s.tolerance("block_diagonal")))
                .residual(Residual::below("commutation", check_commutation(cfg, basis)?, s.tolerance("commutation")));
            let rows: Vec<_> = spectrum
                .eigenvalues
                .iter()
                .zip(&spectrum.branches)
                .map(|(z, b)| (*z, b.as_str()))
                .collect();
            write_spectrum_file(&spectrum_path(&s.output_path), &rows)?;
        }
        Job::Dirac1d {
            grid,
            cfg,
            wilson_r,
            ka_max,
        } => {
            let op = build_dirac_1d(grid, cfg, *wilson_r)?;
            let ev = op.eigenvalues();
            let lowest = ev.iter().copied().find(|&e| e > 0.0);
            report
                .result("n_points", Quantity::Integer(grid.n_points() as i64))
                .result("spacing", Quantity::Real(grid.spacing()))
                .result("lowest_positive", Quantity::Real(lowest.unwrap_or(f64::NAN)));
            report.residual(Residual::below("hermiticity", op.hermiticity_residual(), s.tolerance("hermiticity")));
            let free = matches!(cfg.scalar_potential, ScalarPotential::Constant(v) if v == 0.0)
                && matches!(cfg.vector_potential, VectorPotential::Constant(a) if a == [0.0; 3]);
            if free {
                let check = free_dispersion_check(grid, cfg.mass, *wilson_r, *ka_max)?;
                report.result("continuum_modes", Quantity::Integer(check.modes_compared as i64));
                report
                    .residual(Residual::below("lattice_dispersion", check.lattice_residual, s.tolerance("lattice_dispersion")))
                    .residual(Residual::below("continuum", check.continuum_rel_error, s.tolerance("continuum")));
            }
            if matches!(cfg.scalar_potential, ScalarPotential::Constant(v) if v == 0.0) {
                let k2 = second_order_operator(grid, cfg, *wilson_r)?;
                let second = hermitian_eigenvalues(&k2.matrix);
                let mut squared: Vec<f64> = ev.iter().map(|e| e * e).collect();
                squared.sort_by(f64::total_cmp);
                let r = squared.iter().zip(&second).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                report.residual(Residual::below("second_order", r, s.tolerance("second_order")));
            }
            write_spectrum_file(&spectrum_path(&s.output_path), &spectrum_rows(&ev))?;
        }
        Job::CompareNonrel {
            depth,
            width,
            mass,
            grid,
            wilson_r,
        } => {
            let cmp = nonrel_limit_compare(*depth, *width, *mass, grid, *wilson_r)?;
            for (label, level) in [("m", cmp.base), ("2m", cmp.doubled)] {
                report
                    .result(format!("{label}.mass"), Quantity::Real(level.mass))
                    .result(format!("{label}.dirac_minus_mass"), Quantity::Real(level.dirac_binding))
                    .result(format!("{label}.schrodinger"), Quantity::Real(level.schrodinger))
                    .result(format!("{label}.discrepancy"), Quantity::Real(level.discrepancy));
            }
            report.result("error_ratio", Quantity::Real(cmp.error_ratio));
            report.residual(Residual::below("discrepancy", cmp.base.discrepancy, s.tolerance("discrepancy")));
            if *depth > 0.0 {
                report.residual(Residual::within(
                    "error_ratio",
                    cmp.error_ratio,
                    s.tolerance("ratio_lower"),
                    s.tolerance("ratio_upper"),
                ));
            }
        }
    }
    Ok(())
}

/// Uniform direction, magnitude uniform in `[0, max]`.
pub fn random_rapidity<R: Rng>(rng: &mut R, max: f64) -> RapidityVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    let mag = rng.random_range(0.0..=max);
    RapidityVector::new([mag * s * phi.cos(), mag * s * phi.sin(), mag * z]).expect("finite by construction")
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Runs a parsed scenario and returns its report without writing anything.
pub fn evaluate(s: &Scenario) -> Report {
    let mut report = Report::new(s.echo());
    if let Err(e) = execute(s, &mut report) {
        report.error = Some(e.to_string());
    }
    report
}

#[derive(Debug)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub report: Report,
    pub report_path: PathBuf,
    pub exit_code: i32,
}

/// Parse, run, and write the report. Parse and validation problems come back
/// as `Err` (exit code 2) and write nothing.
pub fn run_scenario(path: &Path) -> Result<ScenarioRun> {
    run_scenario_to(path, None)
}

pub fn run_scenario_to(path: &Path, output: Option<&Path>) -> Result<ScenarioRun> {
    let mut scenario = parse_scenario(path)?;
    if let Some(o) = output {
        scenario.output_path = o.to_path_buf();
    }
    let report = evaluate(&scenario);
    crate::report::write_atomic(&scenario.output_path, &report.to_bytes())?;
    let exit_code = match report.status() {
        Status::Pass => 0,
        Status::Fail => 1,
    };
    let report_path = scenario.output_path.clone();
    Ok(ScenarioRun {
        scenario,
        report,
        report_path,
        exit_code,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunAllEntry {
    pub file: String,
    pub kind: String,
    pub status: String,
    pub exit_code: i32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunAllSummary {
    pub entries: Vec<RunAllEntry>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl RunAllSummary {
    pub fn status(&self) -> Status {
        if self.exit_code == 0 {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn render(&self) -> String {
        let width = self.entries.iter().map(|e| e.file.len()).max().unwrap_or(8).max(8);
        let mut out = format!("{:<width$}  {:<14}  {:<6}  detail\n", "scenario", "kind", "status");
        for e in &self.entries {
            out.push_str(&format!("{:<width$}  {:<14}  {:<6}  {}\n", e.file, e.kind, e.status, e.detail));
        }
        out.push_str(&format!(
            "{} scenario(s), aggregate {}\n",
            self.entries.len(),
            self.status().as_str()
        ));
        out
    }
}

/// Scenario files (`*.json`) directly inside `dir`, sorted by file name.
pub fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Run every scenario in `dir` concurrently; results are ordered by file name
/// and the aggregate exit code is the worst individual one.
pub fn run_all(dir: &Path) -> Result<RunAllSummary> {
    let files = scenario_files(dir)?;
    let mut warnings = Vec::new();
    if files.is_empty() {
        warnings.push(format!("no scenario files found in {}", dir.display()));
    }
    let outcomes: Vec<Result<ScenarioRun>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files.iter().map(|f| scope.spawn(move || run_scenario(f))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Precondition("scenario thread panicked".into()))))
            .collect()
    });
    let entries: Vec<RunAllEntry> = files
        .iter()
        .zip(outcomes)
        .map(|(f, outcome)| {
            let file = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            match outcome {
                Ok(run) => {
                    let detail = match (&run.report.error, run.report.failed_residuals().next()) {
                        (Some(e), _) => e.clone(),
                        (None, Some(r)) => format!("{} = {:.3e}", r.name, r.value),
                        (None, None) => format!("{} residual(s) ok", run.report.residuals.len()),
                    };
                    RunAllEntry {
                        file,
                        kind: run.scenario.kind.as_str().into(),
                        status: run.report.status().as_str().into(),
                        exit_code: run.exit_code,
                        detail,
                    }
                }
                Err(e) => RunAllEntry {
                    file,
                    kind: "?".into(),
                    status: "error".into(),
                    exit_code: e.exit_code(),
                    detail: e.to_string(),
                },
            }
        })
        .collect();
    let exit_code = entries.iter().map(|e| e.exit_code).max().unwrap_or(0);
    Ok(RunAllSummary {
        entries,
        warnings,
        exit_code,
    })
}

/// The built-in algebra suite with default settings.
pub fn check() -> Result<Report> {
    let kind = Kind::AlgebraCheck;
    let params = Map::new();
    let job = build_job(kind, &Params { map: &params, kind }, Path::new("."))?;
    let scenario = Scenario {
        source_path: PathBuf::from("<built-in>"),
        kind,
        parameters: params,
        tolerances: kind.default_tolerances().iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        output_path: PathBuf::new(),
        job,
    };
    Ok(evaluate(&scenario))
}
