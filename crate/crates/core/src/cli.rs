//! Benchmark driver: configuration, the four test cases and report output.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use log::{info, warn};

use crate::assembly::{assemble_load, build_boundary_data, BoundaryCase, LoadVariant};
use crate::crouzeix_raviart::build_cr_ops;
use crate::error::{Error, Result};
use crate::exact::{ExactSolution, Kovasznay, LShaped, Robustness};
use crate::mesh::{
    generate_square_mesh, generate_trapezoid_mesh, generate_triangle_mesh, generate_voronoi_mesh,
    PolygonalMesh, TriangleDomain, Vec2, DEFAULT_LLOYD_ITERATIONS,
};
use crate::morley::{build_local_ops, MorleyDofLayout, MorleyLocalOps, StabScaling};
use crate::postprocess::{
    error_norms, recover_fields, sample_fields, write_error_csv, write_fields_csv, ErrorRow,
    RecoveredFields,
};
use crate::solver::{newton_solve, solve_pressure, Damping, NewtonConfig, PressureSolution, SolveReport, StreamProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestCase {
    Kovasznay,
    LShaped,
    Cavity,
    Robustness,
}

impl FromStr for TestCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kovasznay" => Ok(Self::Kovasznay),
            "lshaped" => Ok(Self::LShaped),
            "cavity" => Ok(Self::Cavity),
            "robustness" => Ok(Self::Robustness),
            _ => Err(Error::Config(format!(
                "test must be kovasznay, lshaped, cavity or robustness, got {s:?}"
            ))),
        }
    }
}

impl TestCase {
    pub fn name(self) -> &'static str {
        match self {
            Self::Kovasznay => "kovasznay",
            Self::LShaped => "lshaped",
            Self::Cavity => "cavity",
            Self::Robustness => "robustness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFamily {
    Square,
    Tri,
    Trap,
    Cvt,
}

impl FromStr for MeshFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Self::Square),
            "tri" => Ok(Self::Tri),
            "trap" => Ok(Self::Trap),
            "cvt" => Ok(Self::Cvt),
            _ => Err(Error::Config(format!(
                "family must be square, tri, trap or cvt, got {s:?}"
            ))),
        }
    }
}

impl MeshFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Square => "square",
            Self::Tri => "tri",
            Self::Trap => "trap",
            Self::Cvt => "cvt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Unit,
    LShape,
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Self::Unit),
            "lshape" => Ok(Self::LShape),
            _ => Err(Error::Config(format!("domain must be unit or lshape, got {s:?}"))),
        }
    }
}

/// Quadrature exactness degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureDegrees {
    /// Cell integrals of data (loads, pressure load).
    pub cell: usize,
    /// Edge integrals of boundary data; 15 gives the 8-point Gauss rule.
    pub edge: usize,
    /// Cell integrals in the error norms.
    pub error: usize,
}

impl Default for QuadratureDegrees {
    fn default() -> Self {
        Self {
            cell: 6,
            edge: 15,
            error: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub test: TestCase,
    pub family: MeshFamily,
    /// Divisions per unit length; the nominal mesh size is `1/n`.
    pub levels: Vec<usize>,
    pub nu: Vec<f64>,
    pub load_variant: LoadVariant,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub lloyd_iters: usize,
    pub domain: Domain,
    pub stab_scaling: StabScaling,
    /// Multiply the viscous part of the pressure load by ν.
    pub pressure_nu: bool,
    pub newton: NewtonConfig,
    pub quadrature: QuadratureDegrees,
}

impl BenchmarkConfig {
    /// Defaults of each test case.
    pub fn for_test(test: TestCase) -> Self {
        let (family, levels, nu, load_variant, domain) = match test {
            TestCase::Kovasznay => (MeshFamily::Square, vec![4, 8, 16, 32, 64], vec![1.0], LoadVariant::Standard, Domain::Unit),
            TestCase::LShaped => (MeshFamily::Tri, vec![4, 8, 16, 32, 64], vec![1.0], LoadVariant::Standard, Domain::LShape),
            TestCase::Cavity => (MeshFamily::Cvt, vec![64], vec![0.01], LoadVariant::Standard, Domain::Unit),
            TestCase::Robustness => (
                MeshFamily::Square,
                vec![32],
                vec![1.0, 1e-1, 1e-2, 1e-3, 1e-4],
                LoadVariant::Rotational,
                Domain::Unit,
            ),
        };
        let mut quadrature = QuadratureDegrees::default();
        if test == TestCase::LShaped {
            quadrature.cell = 10;
        }
        Self {
            test,
            family,
            levels,
            nu,
            load_variant,
            out: None,
            seed: 0,
            lloyd_iters: DEFAULT_LLOYD_ITERATIONS,
            domain,
            stab_scaling: StabScaling::Unscaled,
            pressure_nu: true,
            newton: NewtonConfig::default(),
            quadrature,
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: invalid number {v:?}")))
        };
        let int = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: invalid integer {v:?}")))
        };
        match key {
            "test" => {
                let t: TestCase = value.parse()?;
                *self = Self::for_test(t);
            }
            "family" => self.family = value.parse()?,
            "levels" => self.levels = value.split(',').map(|v| int(v.trim())).collect::<Result<_>>()?,
            "nu" => self.nu = value.split(',').map(|v| num(v.trim())).collect::<Result<_>>()?,
            "load_variant" => self.load_variant = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => self.seed = value.parse().map_err(|_| Error::Config(format!("seed: invalid integer {value:?}")))?,
            "lloyd_iters" => self.lloyd_iters = int(value)?,
            "domain" => self.domain = value.parse()?,
            "stab_scaling" => self.stab_scaling = value.parse()?,
            "pressure_nu" => {
                self.pressure_nu = match value {
                    "on" | "true" => true,
                    "off" | "false" => false,
                    _ => return Err(Error::Config(format!("pressure_nu must be on or off, got {value:?}"))),
                }
            }
            "newton.tol" => self.newton.tolerance = num(value)?,
            "newton.max_iters" => self.newton.max_iterations = int(value)?,
            "newton.damping" => self.newton.damping = value.parse::<Damping>()?,
            "quad.cell" => self.quadrature.cell = int(value)?,
            "quad.edge" => self.quadrature.edge = int(value)?,
            "quad.error" => self.quadrature.error = int(value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() || self.levels.windows(2).any(|w| w[0] >= w[1]) || self.levels[0] == 0 {
            return Err(Error::Config("levels must be positive and strictly increasing".into()));
        }
        if self.nu.is_empty() || self.nu.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::Config("nu must be a list of positive numbers".into()));
        }
        if !(self.newton.tolerance > 0.0) {
            return Err(Error::Config("newton.tol must be positive".into()));
        }
        let needs_tri_lshape = self.domain == Domain::LShape && self.family != MeshFamily::Tri;
        if needs_tri_lshape {
            return Err(Error::Config("the L-shaped domain is only meshed with the tri family".into()));
        }
        if self.test == TestCase::LShaped && self.domain != Domain::LShape {
            return Err(Error::Config("test lshaped requires domain = lshape".into()));
        }
        if self.test != TestCase::LShaped && self.domain == Domain::LShape {
            return Err(Error::Config(format!("test {} runs on the unit square", self.test.name())));
        }
        Ok(())
    }
}

/// Parses a `key = value` file; `#` starts a comment. The `test` key, if
/// present, must come first since it resets the defaults.
pub fn parse_config(text: &str) -> Result<BenchmarkConfig> {
    let mut cfg: Option<BenchmarkConfig> = None;
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !seen.insert(k.to_string()) {
            return Err(Error::Config(format!("line {}: duplicate key {k:?}", i + 1)));
        }
        match &mut cfg {
            None if k == "test" => cfg = Some(BenchmarkConfig::for_test(v.parse()?)),
            None => {
                return Err(Error::Config(format!(
                    "line {}: the first setting must be `test`",
                    i + 1
                )))
            }
            Some(_) if k == "test" => unreachable!("duplicate keys rejected above"),
            Some(c) => c.set(k, v).map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?,
        }
    }
    let cfg = cfg.ok_or_else(|| Error::Config("empty configuration".into()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Mesh of one refinement level. For the L-shaped domain the leg `[-1, 1]`
/// gets `2n` divisions so that the nominal size is `1/n`; CVT meshes use
/// `n²` seeds.
pub fn level_mesh(cfg: &BenchmarkConfig, n: usize) -> Result<PolygonalMesh> {
    Ok(match (cfg.family, cfg.domain) {
        (MeshFamily::Tri, Domain::LShape) => generate_triangle_mesh(2 * n, TriangleDomain::LShaped)?,
        (_, Domain::LShape) => return Err(Error::Config("the L-shaped domain needs the tri family".into())),
        (MeshFamily::Square, _) => generate_square_mesh(n)?,
        (MeshFamily::Tri, _) => generate_triangle_mesh(n, TriangleDomain::UnitSquare)?,
        (MeshFamily::Trap, _) => generate_trapezoid_mesh(n)?,
        (MeshFamily::Cvt, _) => generate_voronoi_mesh(n * n, cfg.lloyd_iters, cfg.seed.wrapping_add(n as u64))?,
    })
}

/// Result of solving one level.
pub struct LevelSolution {
    pub mesh: PolygonalMesh,
    pub ops: Vec<MorleyLocalOps>,
    pub psi: Vec<f64>,
    pub report: SolveReport,
    pub fields: RecoveredFields,
    pub pressure: Option<PressureSolution>,
}

/// Data of one solve: exact solution (if any), force, boundary case.
pub struct LevelProblem<'a> {
    pub exact: Option<&'a dyn ExactSolution>,
    pub force: &'a (dyn Fn(Vec2) -> Vec2 + Sync),
    pub rot_force: Option<&'a (dyn Fn(Vec2) -> f64 + Sync)>,
    pub boundary: BoundaryCase<'a>,
    pub with_pressure: bool,
    pub convection: bool,
}

pub fn solve_level(
    cfg: &BenchmarkConfig,
    mesh: PolygonalMesh,
    nu: f64,
    prob: &LevelProblem<'_>,
) -> Result<LevelSolution> {
    let ops = build_local_ops(&mesh, cfg.stab_scaling)?;
    let dim = MorleyDofLayout::new(&mesh).num_dofs();
    let load = assemble_load(&ops, dim, prob.force, prob.rot_force, cfg.load_variant, cfg.quadrature.cell)?;
    let boundary = build_boundary_data(&mesh, prob.boundary, cfg.quadrature.edge)?;
    let problem = StreamProblem {
        ops: &ops,
        dim,
        nu,
        load,
        boundary,
        convection: prob.convection,
    };
    let (psi, report) = newton_solve(&problem, &cfg.newton)?;
    let fields = recover_fields(&ops, &psi);
    let pressure = if prob.with_pressure {
        let cr = build_cr_ops(&mesh)?;
        let factor = if cfg.pressure_nu { nu } else { 1.0 };
        Some(solve_pressure(&mesh, &ops, &cr, &psi, prob.force, factor, cfg.quadrature.cell)?)
    } else {
        None
    };
    Ok(LevelSolution {
        mesh,
        ops,
        psi,
        report,
        fields,
        pressure,
    })
}

fn exact_problem<'a>(
    exact: &'a dyn ExactSolution,
    force: &'a (dyn Fn(Vec2) -> Vec2 + Sync),
    rot: &'a (dyn Fn(Vec2) -> f64 + Sync),
    with_pressure: bool,
) -> LevelProblem<'a> {
    LevelProblem {
        exact: Some(exact),
        force,
        rot_force: Some(rot),
        boundary: BoundaryCase::Exact(exact),
        with_pressure,
        convection: true,
    }
}

/// A refinement level whose solve failed.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFailure {
    pub n: usize,
    pub message: String,
}

/// Result of a convergence study: rows of the converged levels, failed
/// levels, and the finest converged solution.
pub struct ConvergenceStudy {
    pub rows: Vec<ErrorRow>,
    pub failures: Vec<LevelFailure>,
    pub finest: Option<(usize, LevelSolution)>,
}

/// Convergence study against an exact solution. A failed solve aborts its
/// level only; the failure is recorded and the next level runs.
pub fn run_convergence(cfg: &BenchmarkConfig, exact: &dyn ExactSolution, nu: f64) -> Result<ConvergenceStudy> {
    let force = |p: Vec2| exact.force(p);
    let rot = |p: Vec2| exact.rot_force(p).unwrap_or(f64::NAN);
    let with_p = exact.pressure(Vec2::zeros()).is_some();
    let prob = exact_problem(exact, &force, &rot, with_p);
    if cfg.load_variant == LoadVariant::Rotational && exact.rot_force(Vec2::new(0.5, 0.5)).is_none() {
        return Err(Error::MissingExact("rot f for the rotational load"));
    }
    let mut study = ConvergenceStudy {
        rows: Vec::new(),
        failures: Vec::new(),
        finest: None,
    };
    for &n in &cfg.levels {
        let t0 = Instant::now();
        let mesh = level_mesh(cfg, n)?;
        let sol = match solve_level(cfg, mesh, nu, &prob) {
            Ok(s) => s,
            Err(e @ (Error::NewtonDiverged { .. } | Error::SingularJacobian { .. })) => {
                warn!("{} {} n={n} nu={nu}: level aborted: {e}", cfg.test.name(), cfg.family.name());
                study.failures.push(LevelFailure { n, message: e.to_string() });
                continue;
            }
            Err(e) => return Err(e),
        };
        let p = sol.pressure.as_ref().map(|s| s.p.as_slice());
        let mut row = error_norms(&sol.ops, &sol.fields, p, exact, cfg.quadrature.error)?;
        row.h = 1.0 / n as f64;
        row.newton_iters = sol.report.iterations;
        info!(
            "{} {} n={n} nu={nu}: E2={:.4e} iters={} ({:.1}s)",
            cfg.test.name(),
            cfg.family.name(),
            row.e2_psi,
            row.newton_iters,
            t0.elapsed().as_secs_f64()
        );
        study.rows.push(row);
        study.finest = Some((n, sol));
    }
    Ok(study)
}

pub fn run_kovasznay(cfg: &BenchmarkConfig, nu: f64) -> Result<ConvergenceStudy> {
    run_convergence(cfg, &Kovasznay::new(nu), nu)
}

pub fn run_lshaped(cfg: &BenchmarkConfig, nu: f64) -> Result<ConvergenceStudy> {
    run_convergence(cfg, &LShaped::default(), nu)
}

/// One `(ν, level)` entry of the robustness study; `e2_psi` is `None` when
/// the level failed (see `failure`).
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessEntry {
    pub nu: f64,
    pub h: f64,
    pub e2_psi: Option<f64>,
    pub newton_iters: Option<usize>,
    pub failure: Option<String>,
}

pub fn run_robustness(cfg: &BenchmarkConfig) -> Result<Vec<RobustnessEntry>> {
    let mut out = Vec::new();
    for &nu in &cfg.nu {
        let exact = Robustness { nu };
        let force = |p: Vec2| exact.force(p);
        let rot = |p: Vec2| exact.rot_force(p).unwrap_or(f64::NAN);
        let prob = exact_problem(&exact, &force, &rot, false);
        for &n in &cfg.levels {
            let h = 1.0 / n as f64;
            match solve_level(cfg, level_mesh(cfg, n)?, nu, &prob) {
                Ok(sol) => {
                    let row = error_norms(&sol.ops, &sol.fields, None, &exact, cfg.quadrature.error)?;
                    info!("robustness nu={nu} n={n}: E2={:.4e} iters={}", row.e2_psi, sol.report.iterations);
                    out.push(RobustnessEntry {
                        nu,
                        h,
                        e2_psi: Some(row.e2_psi),
                        newton_iters: Some(sol.report.iterations),
                        failure: None,
                    });
                }
                Err(e @ (Error::NewtonDiverged { .. } | Error::SingularJacobian { .. })) => {
                    warn!("robustness nu={nu} n={n}: level aborted: {e}");
                    out.push(RobustnessEntry {
                        nu,
                        h,
                        e2_psi: None,
                        newton_iters: None,
                        failure: Some(e.to_string()),
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Cavity output: solver report, sampled fields and the primary vortex.
pub struct CavityResult {
    pub nu: f64,
    pub report: SolveReport,
    pub samples: Vec<[f64; 4]>,
    /// Location and value of the sampled minimum of `ψ_h`.
    pub vortex_center: Vec2,
    pub psi_min: f64,
    pub solution: LevelSolution,
}

pub const FIELD_GRID: usize = 101;

pub fn run_cavity(cfg: &BenchmarkConfig, nu: f64) -> Result<CavityResult> {
    let n = *cfg.levels.last().expect("validated");
    let zero = |_: Vec2| Vec2::zeros();
    let zero_rot = |_: Vec2| 0.0;
    let prob = LevelProblem {
        exact: None,
        force: &zero,
        rot_force: Some(&zero_rot),
        boundary: BoundaryCase::Lid,
        with_pressure: true,
        convection: true,
    };
    let sol = solve_level(cfg, level_mesh(cfg, n)?, nu, &prob)?;
    let p = sol.pressure.as_ref().map(|s| s.p.as_slice());
    let samples = sample_fields(&sol.mesh, &sol.fields, &sol.ops, p, FIELD_GRID);
    let (mut best, mut center) = (f64::INFINITY, Vec2::zeros());
    for s in &samples {
        if s[2] < best {
            best = s[2];
            center = Vec2::new(s[0], s[1]);
        }
    }
    info!("cavity nu={nu}: iters={} vortex at ({:.3}, {:.3}) psi_min={best:.4e}", sol.report.iterations, center.x, center.y);
    Ok(CavityResult {
        nu,
        report: sol.report.clone(),
        samples,
        vortex_center: center,
        psi_min: best,
        solution: sol,
    })
}

fn nu_tag(nu: f64) -> String {
    format!("{nu:e}")
}

fn create(dir: &Path, name: &str) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::create_dir_all(dir)?;
    Ok(std::io::BufWriter::new(std::fs::File::create(dir.join(name))?))
}

/// Runs the configured study and writes its reports into `cfg.out`
/// (current directory when unset). Returns the written file paths.
pub fn run(cfg: &BenchmarkConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut written = Vec::new();
    let fam = cfg.family.name();
    match cfg.test {
        TestCase::Kovasznay | TestCase::LShaped => {
            for &nu in &cfg.nu {
                let study = match cfg.test {
                    TestCase::Kovasznay => run_kovasznay(cfg, nu)?,
                    _ => run_lshaped(cfg, nu)?,
                };
                let name = format!("errors_{}_{fam}_nu{}.csv", cfg.test.name(), nu_tag(nu));
                let mut f = create(&dir, &name)?;
                write_error_csv(&study.rows, &mut f)?;
                for fail in &study.failures {
                    writeln!(f, "# level n={} failed: {}", fail.n, fail.message)?;
                }
                written.push(dir.join(name));
                if let Some((n, sol)) = study.finest {
                    let p = sol.pressure.as_ref().map(|s| s.p.as_slice());
                    let samples = sample_fields(&sol.mesh, &sol.fields, &sol.ops, p, FIELD_GRID);
                    let name = format!("fields_{}_{fam}_n{n}_nu{}.csv", cfg.test.name(), nu_tag(nu));
                    write_fields_csv(&samples, &mut create(&dir, &name)?)?;
                    written.push(dir.join(name));
                }
            }
        }
        TestCase::Robustness => {
            let entries = run_robustness(cfg)?;
            let name = format!("robustness_{fam}.csv");
            let mut f = create(&dir, &name)?;
            writeln!(f, "# morley-ns robustness report v1")?;
            writeln!(f, "nu,h,E2_psi,newton_iters")?;
            for e in &entries {
                let e2 = e.e2_psi.map(|v| format!("{v:.4e}")).unwrap_or_default();
                let it = e.newton_iters.map(|v| v.to_string()).unwrap_or_default();
                writeln!(f, "{:e},{:.6e},{e2},{it}", e.nu, e.h)?;
            }
            for e in entries.iter().filter(|e| e.failure.is_some()) {
                writeln!(f, "# nu={:e} h={:.6e} failed: {}", e.nu, e.h, e.failure.as_deref().unwrap_or(""))?;
            }
            written.push(dir.join(name));
        }
        TestCase::Cavity => {
            for &nu in &cfg.nu {
                let res = run_cavity(cfg, nu)?;
                let name = format!("fields_cavity_{fam}_n{}_nu{}.csv", cfg.levels.last().unwrap(), nu_tag(nu));
                write_fields_csv(&res.samples, &mut create(&dir, &name)?)?;
                written.push(dir.join(name));
                let name = format!("cavity_{fam}_nu{}.csv", nu_tag(nu));
                let mut f = create(&dir, &name)?;
                writeln!(f, "# morley-ns cavity report v1")?;
                writeln!(f, "nu,newton_iters,vortex_x,vortex_y,psi_min")?;
                writeln!(
                    f,
                    "{:e},{},{:.6},{:.6},{:.6e}",
                    nu, res.report.iterations, res.vortex_center.x, res.vortex_center.y, res.psi_min
                )?;
                written.push(dir.join(name));
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round() {
        let cfg = parse_config(
            "test = kovasznay\nfamily = trap # comment\nlevels = 4, 8\nnu = 0.01\nnewton.tol = 1e-9\nstab_scaling = homogenized\n",
        )
        .unwrap();
        assert_eq!(cfg.family, MeshFamily::Trap);
        assert_eq!(cfg.levels, vec![4, 8]);
        assert_eq!(cfg.nu, vec![0.01]);
        assert_eq!(cfg.newton.tolerance, 1e-9);
        assert_eq!(cfg.stab_scaling, StabScaling::Homogenized);
    }

    #[test]
    fn config_errors() {
        assert!(parse_config("").is_err());
        assert!(parse_config("family = tri\n").is_err());
        assert!(parse_config("test = kovasznay\nlevels = 8, 4\n").is_err());
        assert!(parse_config("test = kovasznay\nnu = -1\n").is_err());
        assert!(parse_config("test = kovasznay\nbogus = 1\n").is_err());
        assert!(parse_config("test = kovasznay\nfamily = tri\nfamily = square\n").is_err());
        assert!(parse_config("test = lshaped\nfamily = square\n").is_err());
        assert!(parse_config("test = kovasznay\nnoequals\n").is_err());
    }

    #[test]
    fn lshaped_defaults() {
        let cfg = BenchmarkConfig::for_test(TestCase::LShaped);
        let m = level_mesh(&cfg, 4).unwrap();
        // 8 divisions of [-1,1]: three 4x4 blocks of squares, two triangles each
        assert_eq!(m.num_cells(), 96);
        assert!((m.total_area() - 3.0).abs() < 1e-12);
    }
}
