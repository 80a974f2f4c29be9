use serde::Serialize;
use thiserror::Error;

use union_channel::capacity::{avg_feedback_capacity, big_f, naive_bound, CapacityReport};
use union_channel::codec::{best_params, simulate, validate_params, CodeParams, MAX_ALPHABET};
use union_channel::oracle::{grid_max_joint_entropy, random_feasible_sampler};
use union_channel::rate_root;

use crate::output::{csv_rows, fixed5, json_lines, key_values, HumanTable, OutputFormat};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A check failed or the library reported an error: exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl From<union_channel::Error> for CliError {
    fn from(e: union_channel::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// Output of a command plus whether every check it ran passed.
pub struct Rendered {
    pub text: String,
    pub ok: bool,
}

fn passed(text: String) -> Rendered {
    Rendered { text, ok: true }
}

fn render_err(e: String) -> CliError {
    CliError::Failure(format!("rendering failed: {e}"))
}

pub fn capacity(q: usize, format: OutputFormat) -> Result<Rendered, CliError> {
    let r = avg_feedback_capacity(q)?;
    let text = match format {
        OutputFormat::Table => key_values(&[
            ("q", q.to_string()),
            ("R(E)", fixed5(r.r_e_nofeedback)),
            ("R(E_f)", fixed5(r.r_ef)),
            ("theta*", fixed5(r.theta_star)),
            ("case", r.case_tag.tag().to_string()),
            ("lower", fixed5(r.r_of_lower)),
        ]),
        OutputFormat::Csv => csv_rows(&[&r]).map_err(render_err)?,
        OutputFormat::Jsonl => json_lines(&[&r]).map_err(render_err)?,
    };
    Ok(passed(text))
}

pub fn table(q_max: usize, format: OutputFormat) -> Result<Rendered, CliError> {
    let rows: Vec<CapacityReport> = (2..=q_max)
        .map(avg_feedback_capacity)
        .collect::<Result<_, _>>()?;
    // Past q = 4 the capacity must equal the naive output-alphabet bound.
    let ok = rows
        .iter()
        .filter(|r| r.q >= 5)
        .all(|r| (r.r_ef - naive_bound(r.q)).abs() <= 1e-12);
    let text = match format {
        OutputFormat::Table => {
            let mut t = HumanTable::new(&["q", "R(E)", "R(E_f)", "theta*", "lower", "case"]);
            for r in &rows {
                t.row(vec![
                    r.q.to_string(),
                    fixed5(r.r_e_nofeedback),
                    fixed5(r.r_ef),
                    fixed5(r.theta_star),
                    fixed5(r.r_of_lower),
                    r.case_tag.tag().to_string(),
                ]);
            }
            let mut s = t.render();
            s.push_str(
                "note: zero-error capacities are not computed here; the best known \
                 external bound for q = 2 is R(O_f) >= 0.78974.\n",
            );
            s
        }
        OutputFormat::Csv => csv_rows(&rows).map_err(render_err)?,
        OutputFormat::Jsonl => json_lines(&rows).map_err(render_err)?,
    };
    Ok(Rendered { text, ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaMethod {
    /// Grid for q <= 3, sampler otherwise.
    Auto,
    Grid,
    Sampler,
}

/// Finest grid step accepted for the ternary sweep.
pub const TERNARY_MIN_RESOLUTION: f64 = 1e-3;
const GRID_TOLERANCE: f64 = 1e-3;
const SAMPLER_EXCESS: f64 = 1e-9;
const SAMPLER_SHORTFALL: f64 = 0.02;
/// Inputs this close to `1/q` are read as exactly `1/q`.
const THETA_SNAP: f64 = 1e-6;

pub struct LemmaArgs {
    pub q: usize,
    pub theta: f64,
    pub method: LemmaMethod,
    pub resolution: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
struct LemmaReport {
    q: usize,
    theta: f64,
    method: LemmaMethod,
    resolution: Option<f64>,
    samples: Option<usize>,
    accepted: Option<usize>,
    seed: Option<u64>,
    oracle_max: Option<f64>,
    closed_form: Option<f64>,
    gap: Option<f64>,
    tolerance: String,
    pass: Option<bool>,
}

pub fn lemma(args: LemmaArgs, format: OutputFormat) -> Result<Rendered, CliError> {
    let LemmaArgs {
        q,
        mut theta,
        method,
        resolution,
        samples,
        seed,
    } = args;
    if !(0.0..=1.0).contains(&theta) {
        return Err(CliError::Usage(format!(
            "--theta must lie in [0, 1], got {theta}"
        )));
    }
    let lo = 1.0 / q as f64;
    if (theta - lo).abs() <= THETA_SNAP {
        theta = lo;
    }
    let method = match method {
        LemmaMethod::Auto if q <= 3 => LemmaMethod::Grid,
        LemmaMethod::Auto => LemmaMethod::Sampler,
        m => m,
    };
    // The closed form only covers theta >= 1/q.
    let closed_form = if theta >= lo {
        Some(big_f(theta, q)?)
    } else {
        None
    };

    let report = match method {
        LemmaMethod::Grid => {
            if q > 3 {
                return Err(CliError::Usage(format!(
                    "the grid oracle supports q = 2 or 3 only (got q = {q}); use --method sampler"
                )));
            }
            let res = resolution.unwrap_or(if q == 2 { 1e-4 } else { 1e-2 });
            if !(res > 0.0 && res <= 0.5) {
                return Err(CliError::Usage(format!(
                    "--resolution must lie in (0, 0.5], got {res}"
                )));
            }
            if q == 3 && res < TERNARY_MIN_RESOLUTION {
                return Err(CliError::Usage(format!(
                    "--resolution below {TERNARY_MIN_RESOLUTION} is too fine for the q = 3 grid"
                )));
            }
            let opt = grid_max_joint_entropy(q, theta, res)?.ok_or_else(|| {
                CliError::Failure(format!(
                    "no grid pair with q = {q} is feasible at theta = {theta}"
                ))
            })?;
            let gap = closed_form.map(|f| (opt.value - f).abs());
            LemmaReport {
                q,
                theta,
                method,
                resolution: Some(res),
                samples: None,
                accepted: None,
                seed: None,
                oracle_max: Some(opt.value),
                closed_form,
                gap,
                tolerance: format!("|oracle - F| <= {GRID_TOLERANCE}"),
                pass: gap.map(|g| g <= GRID_TOLERANCE),
            }
        }
        _ => {
            if theta < lo {
                return Err(CliError::Usage(format!(
                    "theta = {theta} is below 1/q = {lo}; the sampler only reaches theta in [1/q, 1]"
                )));
            }
            if samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let res = random_feasible_sampler(q, theta, samples, seed)?;
            let f = closed_form.expect("theta >= 1/q");
            let pass = res
                .best
                .map(|b| b <= f + SAMPLER_EXCESS && b >= f - SAMPLER_SHORTFALL)
                .unwrap_or(false);
            LemmaReport {
                q,
                theta,
                method,
                resolution: None,
                samples: Some(samples),
                accepted: Some(res.accepted),
                seed: Some(seed),
                oracle_max: res.best,
                closed_form,
                gap: res.best.map(|b| f - b),
                tolerance: format!("F - {SAMPLER_SHORTFALL} <= oracle <= F + {SAMPLER_EXCESS:e}"),
                pass: Some(pass),
            }
        }
    };
    let ok = report.pass != Some(false);
    let text = match format {
        OutputFormat::Table => {
            let opt5 = |x: Option<f64>| x.map(fixed5).unwrap_or_else(|| "n/a".into());
            let mut kv = vec![
                ("q", q.to_string()),
                ("theta", fixed5(theta)),
                (
                    "method",
                    match method {
                        LemmaMethod::Grid => "grid",
                        _ => "sampler",
                    }
                    .to_string(),
                ),
            ];
            if let Some(r) = report.resolution {
                kv.push(("resolution", format!("{r:e}")));
            }
            if let (Some(s), Some(a)) = (report.samples, report.accepted) {
                kv.push(("samples", format!("{s} ({a} accepted)")));
                kv.push(("seed", seed.to_string()));
            }
            kv.push(("oracle max", opt5(report.oracle_max)));
            kv.push(("closed form F", opt5(report.closed_form)));
            kv.push((
                if method == LemmaMethod::Grid {
                    "|oracle - F|"
                } else {
                    "F - oracle"
                },
                report
                    .gap
                    .map(|g| format!("{g:.2e}"))
                    .unwrap_or_else(|| "n/a".into()),
            ));
            kv.push(("tolerance", report.tolerance.clone()));
            kv.push((
                "result",
                match report.pass {
                    Some(true) => "PASS".into(),
                    Some(false) => "FAIL".into(),
                    None => "no closed form below 1/q; oracle value only".into(),
                },
            ));
            key_values(&kv)
        }
        OutputFormat::Csv => csv_rows(&[&report]).map_err(render_err)?,
        OutputFormat::Jsonl => json_lines(&[&report]).map_err(render_err)?,
    };
    Ok(Rendered { text, ok })
}

pub struct CodecArgs {
    pub q: usize,
    pub n: usize,
    pub m: usize,
    pub blocks: usize,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Serialize)]
struct CodecSummary {
    q: usize,
    n: usize,
    m: usize,
    blocks: usize,
    seed: u64,
    trials: usize,
    errors: usize,
    zero_error: bool,
    max_uncertainty: usize,
    max_uses: usize,
    uses_bound: usize,
    achieved_rate: f64,
    asymptotic_rate: f64,
}

pub fn codec(args: CodecArgs, format: OutputFormat) -> Result<Rendered, CliError> {
    let CodecArgs {
        q,
        n,
        m,
        blocks,
        trials,
        seed,
    } = args;
    if q > MAX_ALPHABET {
        return Err(CliError::Usage(format!(
            "--q must be at most {MAX_ALPHABET}"
        )));
    }
    if m == 0 || m > n {
        return Err(CliError::Usage(format!(
            "need 1 <= m <= n, got n = {n}, m = {m}"
        )));
    }
    let check = validate_params(q, n, m);
    if !check.feasible {
        let lhs = check
            .lhs
            .as_ref()
            .map(|l| l.to_string())
            .unwrap_or_else(|| "undefined (m < n/2)".into());
        return Err(CliError::Usage(format!(
            "refusing infeasible parameters (q, n, m) = ({q}, {n}, {m}): \
             LHS = C(2n-2m, n-m) * 2^(2m-n) = {lhs} > RHS = C(n, m) * q^(n-m) = {}",
            check.rhs
        )));
    }
    let params = CodeParams::new(q, n, m, blocks).map_err(|e| CliError::Usage(e.to_string()))?;
    let rep = simulate(params, trials, seed)?;
    let ok = rep.zero_error() && rep.max_uses <= rep.uses_bound;
    let summary = CodecSummary {
        q,
        n,
        m,
        blocks,
        seed,
        trials: rep.trials.len(),
        errors: rep.errors,
        zero_error: rep.zero_error(),
        max_uncertainty: rep.max_uncertainty,
        max_uses: rep.max_uses,
        uses_bound: rep.uses_bound,
        achieved_rate: rep.achieved_rate,
        asymptotic_rate: m as f64 / n as f64,
    };
    let text = match format {
        OutputFormat::Table => key_values(&[
            ("params", format!("q = {q}, n = {n}, m = {m}, B = {blocks}")),
            ("trials", format!("{} (seed {seed})", rep.trials.len())),
            ("errors", rep.errors.to_string()),
            (
                "zero-error",
                if rep.zero_error() { "yes" } else { "NO" }.to_string(),
            ),
            (
                "max uncertainty",
                format!(
                    "{} (pattern count {}, peak bound {})",
                    rep.max_uncertainty,
                    check.rhs,
                    check.lhs.as_ref().expect("feasible")
                ),
            ),
            (
                "max uses",
                format!("{} (bound {})", rep.max_uses, rep.uses_bound),
            ),
            ("achieved rate", fixed5(rep.achieved_rate)),
            ("m/n", fixed5(summary.asymptotic_rate)),
        ]),
        OutputFormat::Csv => csv_rows(&[&summary]).map_err(render_err)?,
        OutputFormat::Jsonl => rep.to_json_lines(),
    };
    Ok(Rendered { text, ok })
}

#[derive(Serialize)]
struct ParamRow {
    q: usize,
    n: usize,
    m: usize,
    rate: f64,
    rate_root: f64,
    below_root: bool,
}

pub fn params(q: usize, n_max: usize, format: OutputFormat) -> Result<Rendered, CliError> {
    if q > MAX_ALPHABET {
        return Err(CliError::Usage(format!(
            "--q must be at most {MAX_ALPHABET}"
        )));
    }
    let root = rate_root(q)?;
    let rows: Vec<ParamRow> = best_params(q, n_max)
        .into_iter()
        .map(|c| ParamRow {
            q,
            n: c.n,
            m: c.m,
            rate: c.rate,
            rate_root: root,
            below_root: c.rate < root,
        })
        .collect();
    let text = match format {
        OutputFormat::Table => {
            let mut t = HumanTable::new(&["n", "m", "m/n", "root - m/n"]);
            for r in &rows {
                t.row(vec![
                    r.n.to_string(),
                    r.m.to_string(),
                    fixed5(r.rate),
                    fixed5(root - r.rate),
                ]);
            }
            let mut s = format!("rate root for q = {q}: {}\n", fixed5(root));
            if rows.is_empty() {
                s.push_str(&format!("no feasible (n, m) with n <= {n_max}\n"));
            } else {
                s.push_str(&t.render());
            }
            s
        }
        OutputFormat::Csv => csv_rows(&rows).map_err(render_err)?,
        OutputFormat::Jsonl => json_lines(&rows).map_err(render_err)?,
    };
    Ok(passed(text))
}
