//! One function per subcommand, each producing a [`Table`].

use anyhow::{bail, Result};
use serde_json::Value;

use dpsqkd_core::bounds::{omega, omega_enumerated};
use dpsqkd_core::keyrate::SearchGrids;
use dpsqkd_core::verify::{self, VerifyConfig};
use dpsqkd_core::{
    BlockConfig, Branch, KeyRateEngine, KeyRateResult, OmegaValue, PhaseErrorBoundary, PhaseErrorModel, SpectralOracle,
};

use crate::args::{BoundArgs, Command, CurveArgs, KeyrateArgs, VerifyArgs};
use crate::table::{Cell, Table};

/// Bad flag combination that clap cannot see; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub struct Outcome {
    pub table: Table,
    /// Echoed as `config` in JSON output.
    pub config: Value,
    /// False only when a verification check failed.
    pub passed: bool,
}

pub fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Bound(a) => Ok(Outcome {
            table: bound(a)?,
            config: serde_json::to_value(a)?,
            passed: true,
        }),
        Command::Curve(a) => Ok(Outcome {
            table: curve(a)?,
            config: serde_json::to_value(a)?,
            passed: true,
        }),
        Command::Keyrate(a) => Ok(Outcome {
            table: keyrate(a)?,
            config: serde_json::to_value(a)?,
            passed: true,
        }),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn block(pulses: u64) -> Result<BlockConfig> {
    let pulses = usize::try_from(pulses).map_err(|_| UsageError(format!("--L {pulses} is too large")))?;
    Ok(BlockConfig::new(pulses)?)
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
        Branch::Combined => "combined",
    }
}

fn omega_for(cfg: &BlockConfig, model: PhaseErrorModel, nu: usize, lambda: f64) -> Result<OmegaValue> {
    Ok(match model {
        PhaseErrorModel::Complementarity => omega(cfg, nu, lambda)?,
        PhaseErrorModel::ShorPreskill => omega_enumerated(&SpectralOracle::new(*cfg, model), nu, lambda)?,
    })
}

/// Columns: `lambda`, then per model `{m}_minus`, `{m}_plus`, `{m}_omega`,
/// `{m}_branch`. A branch with no blocks is left blank.
pub fn bound(a: &BoundArgs) -> Result<Table> {
    let cfg = block(a.pulses)?;
    let nu = usize::from(a.nu);
    let models = a.model.models();
    let mut header = vec!["lambda".to_owned()];
    for m in &models {
        let s = m.short_name();
        header.extend(["minus", "plus", "omega", "branch"].map(|c| format!("{s}_{c}")));
    }
    let mut table = Table::new(header);
    for lambda in a.lambda_grid.values() {
        let mut row = vec![Cell::from(lambda)];
        for &m in &models {
            let v = omega_for(&cfg, m, nu, lambda)?;
            row.extend([
                v.minus.into(),
                v.plus.into(),
                v.value.into(),
                branch_name(v.branch).into(),
            ]);
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Columns: `e_b`, then per model `e_ph_{m}` and `lambda_{m}`, the slope
/// attaining the envelope (blank where the envelope is closed-form).
pub fn curve(a: &CurveArgs) -> Result<Table> {
    let cfg = block(a.pulses)?;
    let nu = usize::from(a.nu);
    let grid: Vec<f64> = match a.eb {
        Some(e) => vec![e],
        None => {
            let n = a.eb_points as usize;
            (0..n).map(|k| 0.5 * k as f64 / (n - 1) as f64).collect()
        }
    };
    let models = a.model.models();
    let mut header = vec!["e_b".to_owned()];
    let mut columns = Vec::new();
    for &m in &models {
        header.push(format!("e_ph_{}", m.short_name()));
        header.push(format!("lambda_{}", m.short_name()));
        let points = PhaseErrorBoundary::new(cfg, m, nu)?.points(&grid)?;
        if nu == 1 && m == PhaseErrorModel::Complementarity {
            let other = BlockConfig::new(if cfg.pulses() == 3 { 4 } else { 3 })?;
            let again = PhaseErrorBoundary::new(other, m, nu)?.points(&grid)?;
            for (p, q) in points.iter().zip(&again) {
                if p.bound != q.bound {
                    bail!(
                        "one-photon boundary depends on the block length at e_b = {}: {} vs {}",
                        p.e_b,
                        p.bound,
                        q.bound
                    );
                }
            }
        }
        columns.push(points);
    }
    let mut table = Table::new(header);
    for (k, &e) in grid.iter().enumerate() {
        let mut row = vec![Cell::from(e)];
        for col in &columns {
            row.push(col[k].bound.into());
            row.push(col[k].lambda.into());
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Columns: `distance_km`, then per model `g_{m}`, `alpha_sq_opt_{m}`,
/// `gamma_opt_{m}`, `no_key_{m}`; with both models a final `ratio`
/// (`g_comp / g_sp`, blank when `g_sp` is zero).
pub fn keyrate(a: &KeyrateArgs) -> Result<Table> {
    let cfg = block(a.pulses)?;
    let distances = a.distances().map_err(UsageError)?;
    let grids = SearchGrids {
        alpha_sq: (a.alpha_grid.lo, a.alpha_grid.hi),
        alpha_points: a.alpha_grid.points,
        gamma: (a.gamma_grid.lo, a.gamma_grid.hi),
        gamma_points: a.gamma_grid.points,
    };
    let models = a.model.models();
    let mut header = vec!["distance_km".to_owned()];
    let mut sweeps: Vec<Vec<KeyRateResult>> = Vec::new();
    for &m in &models {
        let s = m.short_name();
        header.extend(["g", "alpha_sq_opt", "gamma_opt", "no_key"].map(|c| format!("{c}_{s}")));
        let engine = KeyRateEngine::new(cfg, m)?.with_grids(grids)?;
        sweeps.push(engine.distance_sweep(a.eb, &distances)?);
    }
    let both = models.len() == 2;
    if both {
        header.push("ratio".to_owned());
    }
    let mut table = Table::new(header);
    for (k, &d) in distances.iter().enumerate() {
        let mut row = vec![Cell::from(d)];
        for sweep in &sweeps {
            let r = &sweep[k];
            row.extend([r.g.into(), r.alpha_sq_opt.into(), r.gamma_opt.into(), r.no_key.into()]);
        }
        if both {
            let (c, s) = (sweeps[0][k].g, sweeps[1][k].g);
            row.push(if s > 0.0 { Cell::Num(c / s) } else { Cell::Empty });
        }
        table.push(row)?;
    }
    Ok(table)
}

/// Columns: `name`, `passed`, `residual`, `tolerance`, `cases`, `detail`.
/// Failing check names also go to stderr.
fn verify_cmd(a: &VerifyArgs) -> Result<Outcome> {
    let l_max = usize::try_from(a.l_max).map_err(|_| UsageError(format!("--L-max {} is too large", a.l_max)))?;
    let mut cfg = VerifyConfig::default().with_l_max(l_max);
    if let Some(eps) = a.canary {
        cfg = cfg.with_canary(eps);
    }
    let report = verify::run(&cfg)?;
    let mut table = Table::new(["name", "passed", "residual", "tolerance", "cases", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.name.as_str().into(),
            c.passed.into(),
            c.residual.into(),
            c.tolerance.into(),
            c.cases.into(),
            c.detail.as_str().into(),
        ])?;
    }
    for c in report.failures() {
        eprintln!("FAILED {}: residual {:e}; {}", c.name, c.residual, c.detail);
    }
    Ok(Outcome {
        table,
        config: serde_json::to_value(&report.config)?,
        passed: report.passed,
    })
}
