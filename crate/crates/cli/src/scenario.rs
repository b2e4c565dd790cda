//! Scenario files and the instance descriptions they carry.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vecdual_core::cone_order::{ConeSpec, ExtendedPoint, PolyhedralCone};
use vecdual_core::mappings::{Lattice, LinOp, SampledMap};
use vecdual_core::perturbation::{CCVPInstance, CcvdGrids, P1Options, PerturbationProblem};
use vecdual_core::scalar_fl::ScalarInstance;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Primal,
    Dual,
    Farkas,
    Representation,
    A2,
    Properties,
    ExampleP1,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub instance: Option<InstanceSpec>,
    /// Path of a JSON file holding the instance, relative to the scenario.
    #[serde(default)]
    pub instance_file: Option<PathBuf>,
    /// CCVP dual variant, 1 to 4.
    #[serde(default)]
    pub variant: Option<u8>,
    #[serde(default)]
    pub loose: bool,
    #[serde(rename = "L_grid", default)]
    pub l_grid: Option<GridSpec>,
    #[serde(rename = "T_grids", default)]
    pub t_grids: Option<TGrids>,
    #[serde(default)]
    pub probe: ProbeSpec,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// `"M"` or `"M+"` for the Farkas tasks.
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub suites: Option<SuiteSizes>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Operators listed by their rows, or every matrix with entries on
/// `lo..=hi` at `step`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<Vec<Vec<f64>>>),
    Box { rows: usize, cols: usize, lo: f64, hi: f64, step: f64 },
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<LinOp>, CliError> {
        match self {
            GridSpec::List(ms) => ms.iter().map(|m| LinOp::from_rows(m.clone()).map_err(CliError::from)).collect(),
            GridSpec::Box { rows, cols, lo, hi, step } => {
                let vals = Lattice::axis(*lo, *hi, *step);
                let n = rows * cols;
                let total = vals.len().checked_pow(n as u32).unwrap_or(usize::MAX);
                if total > vecdual_core::perturbation::table_cap() {
                    return Err(CliError::Schema(format!("operator box of {total} matrices exceeds the table cap")));
                }
                let mut out = vec![Vec::new()];
                for _ in 0..n {
                    out = out.into_iter().flat_map(|v: Vec<f64>| vals.iter().map(move |a| [v.clone(), vec![*a]].concat())).collect();
                }
                out.into_iter()
                    .map(|flat| LinOp::from_rows(flat.chunks(*cols).map(|c| c.to_vec()).collect()).map_err(CliError::from))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGrids {
    #[serde(rename = "T", default)]
    pub t: Option<GridSpec>,
    #[serde(rename = "L1", default)]
    pub l1: Option<GridSpec>,
    #[serde(rename = "L2", default)]
    pub l2: Option<GridSpec>,
    #[serde(rename = "L3", default)]
    pub l3: Option<GridSpec>,
    #[serde(rename = "T1", default)]
    pub t1: Option<GridSpec>,
    #[serde(rename = "T2", default)]
    pub t2: Option<GridSpec>,
}

impl TGrids {
    pub fn ccvd(&self, l: Option<LinOp>) -> Result<CcvdGrids, CliError> {
        let b = |g: &Option<GridSpec>| g.as_ref().map_or(Ok(Vec::new()), |g| g.build());
        Ok(CcvdGrids { l, l1: b(&self.l1)?, l2: b(&self.l2)?, l3: b(&self.l3)?, t1: b(&self.t1)?, t2: b(&self.t2)? })
    }
}

/// Square probe window `[lo, hi]^m` with `res` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    pub res: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default)]
    pub window: Option<Window>,
    /// Explicit probe values `y`.
    #[serde(default)]
    pub points: Option<Vec<Vec<f64>>>,
    /// Number of seeded probes near the zero-slice front.
    #[serde(default)]
    pub random: Option<usize>,
    /// `(x*, r)` pairs for the A2 task.
    #[serde(default)]
    pub pairs: Option<Vec<(Vec<f64>, f64)>>,
}

/// Case counts of the property task; defaults are the acceptance sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteSizes {
    pub sets_r2: usize,
    pub sets_r3: usize,
    pub maps: usize,
    pub farkas_instances: usize,
    pub farkas_probes: usize,
    pub convex_fixtures: usize,
    pub ccvp_instances: usize,
    pub scalar_slater: usize,
    pub scalar_violating: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            sets_r2: 100,
            sets_r3: 50,
            maps: 100,
            farkas_instances: 50,
            farkas_probes: 20,
            convex_fixtures: 20,
            ccvp_instances: 20,
            scalar_slater: 20,
            scalar_violating: 5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub report: String,
    pub front_csv: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { report: "report.json".into(), front_csv: "front.csv".into() }
    }
}

/// One axis as explicit values or as `lo..=hi` at `step`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Values(Vec<f64>),
    Range { lo: f64, hi: f64, step: f64 },
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AxisSpec::Values(v) => v.clone(),
            AxisSpec::Range { lo, hi, step } => Lattice::axis(*lo, *hi, *step),
        }
    }
}

pub fn lattice(axes: &[AxisSpec]) -> Result<Lattice, CliError> {
    Ok(Lattice::new(axes.iter().map(AxisSpec::values).collect())?)
}

/// `Σ c Π x_i^e_i` as a list of `[c, [e_1, ..., e_n]]` terms.
pub type Poly = Vec<(f64, Vec<u32>)>;

pub fn eval_poly(p: &Poly, x: &[f64]) -> f64 {
    p.iter().map(|(c, e)| c * e.iter().zip(x).map(|(k, v)| v.powi(*k as i32)).product::<f64>()).sum()
}

/// A sampled map given by a table or by polynomial coordinates on a lattice,
/// `+inf` where some `domain` polynomial is positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Table { samples: Vec<Vec<f64>>, values: Vec<ExtendedPoint>, cone: ConeSpec },
    Formula { axes: Vec<AxisSpec>, coords: Vec<Poly>, #[serde(default)] domain: Vec<Poly>, cone: ConeSpec },
}

impl MapSpec {
    pub fn build(&self) -> Result<SampledMap, CliError> {
        match self {
            MapSpec::Table { samples, values, cone } => {
                let k = cone.build()?;
                if samples.len() != values.len() {
                    return Err(CliError::Schema(format!("{} samples but {} values", samples.len(), values.len())));
                }
                match table_lattice(samples) {
                    Some((lat, order)) => {
                        let vals = order.iter().map(|&i| values[i].clone()).collect();
                        Ok(SampledMap::on_lattice(lat, vals, &k)?)
                    }
                    None => Ok(SampledMap::new(samples.clone(), values.clone(), &k)?),
                }
            }
            MapSpec::Formula { axes, coords, domain, cone } => {
                let k = cone.build()?;
                if coords.len() != k.dim() {
                    return Err(CliError::Schema(format!("{} coordinates for a cone in R^{}", coords.len(), k.dim())));
                }
                let lat = lattice(axes)?;
                if lat.len() > vecdual_core::perturbation::table_cap() {
                    return Err(CliError::Schema(format!("lattice of {} points exceeds the table cap", lat.len())));
                }
                Ok(SampledMap::tabulate(lat, &k, |x| {
                    if domain.iter().any(|d| eval_poly(d, x) > 1e-12) {
                        ExtendedPoint::PlusInf
                    } else {
                        ExtendedPoint::Finite(coords.iter().map(|p| eval_poly(p, x)).collect())
                    }
                })?)
            }
        }
    }
}

/// The product lattice spanned by the samples when they fill it exactly
/// once, with the sample index of every lattice point.
fn table_lattice(samples: &[Vec<f64>]) -> Option<(Lattice, Vec<usize>)> {
    let d = samples.first()?.len();
    let mut axes: Vec<Vec<f64>> = vec![Vec::new(); d];
    for s in samples {
        for (a, v) in axes.iter_mut().zip(s) {
            a.push(*v);
        }
    }
    for a in &mut axes {
        a.sort_by(f64::total_cmp);
        a.dedup();
    }
    if axes.iter().map(Vec::len).product::<usize>() != samples.len() {
        return None;
    }
    let lat = Lattice::new(axes).ok()?;
    let mut order = vec![usize::MAX; samples.len()];
    for (i, s) in samples.iter().enumerate() {
        let j = lat.locate(s)?;
        if order[j] != usize::MAX {
            return None;
        }
        order[j] = i;
    }
    Some((lat, order))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    /// `Φ` on a lattice whose first `x_dim` axes carry `x`.
    Perturbation {
        phi: MapSpec,
        x_dim: usize,
        #[serde(rename = "S")]
        s: ConeSpec,
        #[serde(default)]
        operators: Option<GridSpec>,
    },
    /// `F`, `H`, `G` share the X lattice; `G` is ordered by S, `H` by P.
    Ccvp {
        #[serde(rename = "F")]
        f: MapSpec,
        #[serde(default)]
        kappa: Option<MapSpec>,
        #[serde(rename = "H", default)]
        h: Option<MapSpec>,
        #[serde(rename = "G")]
        g: MapSpec,
        /// `C = {x : p(x) <= 0 for every p}`; all of X when absent.
        #[serde(rename = "C", default)]
        c: Vec<Poly>,
        z_box: Vec<AxisSpec>,
        #[serde(default)]
        x_shift: Option<Vec<AxisSpec>>,
    },
    Scalar(ScalarInstance),
    ExampleP1 {
        #[serde(default)]
        x: Option<(f64, f64, f64)>,
        #[serde(default)]
        z: Option<(f64, f64, f64)>,
        #[serde(default)]
        cd: Option<(f64, f64, f64)>,
    },
}

/// An instance ready for the tasks.
pub enum Instance {
    Perturbation(PerturbationProblem),
    Ccvp(CCVPInstance),
    Scalar(ScalarInstance),
    ExampleP1(P1Options),
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance, CliError> {
        Ok(match self {
            InstanceSpec::Perturbation { phi, x_dim, s, operators } => {
                let ops = operators.as_ref().map_or(Ok(Vec::new()), GridSpec::build)?;
                let s: PolyhedralCone = s.build()?;
                Instance::Perturbation(PerturbationProblem::new(phi.build()?, *x_dim, s.into(), ops)?)
            }
            InstanceSpec::Ccvp { f, kappa, h, g, c, z_box, x_shift } => {
                let f = f.build()?;
                let flags = (0..f.len()).map(|i| c.iter().all(|p| eval_poly(p, f.sample(i)) <= 1e-12)).collect();
                let inst = CCVPInstance {
                    kappa: kappa.as_ref().map(MapSpec::build).transpose()?,
                    h: h.as_ref().map(MapSpec::build).transpose()?,
                    g: g.build()?,
                    c: flags,
                    z_box: lattice(z_box)?,
                    x_shift: x_shift.as_deref().map(lattice).transpose()?,
                    f,
                };
                inst.validate()?;
                Instance::Ccvp(inst)
            }
            InstanceSpec::Scalar(s) => {
                s.validate()?;
                Instance::Scalar(s.clone())
            }
            InstanceSpec::ExampleP1 { x, z, cd } => {
                let d = P1Options::default();
                Instance::ExampleP1(P1Options { x: x.unwrap_or(d.x), z: z.unwrap_or(d.z), cd: cd.unwrap_or(d.cd) })
            }
        })
    }
}

/// Parse JSON text, reporting syntax and schema errors with their position.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &Path) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        path: origin.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario, CliError> {
        let mut sc: Scenario = parse_json(&read(path)?, path)?;
        if let Some(rel) = sc.instance_file.take() {
            if sc.instance.is_some() {
                return Err(CliError::Schema("give either instance or instance_file, not both".into()));
            }
            let full = path.parent().unwrap_or(Path::new(".")).join(rel);
            sc.instance = Some(parse_json(&read(&full)?, &full)?);
        }
        Ok(sc)
    }

    pub fn instance(&self) -> Result<Instance, CliError> {
        self.instance.as_ref().ok_or_else(|| CliError::Schema(format!("task {:?} needs an instance", self.task)))?.build()
    }
}
