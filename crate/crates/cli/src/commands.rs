use schurand::codes::{
    approx_bound, choi_error_bound, figure2_sweep, renyi2_mi_bound, sampled_choi_error, CodeInstance, Ensemble,
    MiMode,
};
use schurand::haar::{RngStream, SymmetricUnitary};
use schurand::irrep::IrrepBlockRep;
use schurand::otoc::{scaling_sweep, Evaluation, OtocMode};
use schurand::qntk::{heuristic_kbar, qntk_average_for_state, train, CqaAnsatz, InitialState, LearningProblem};
use schurand::rep::{sectors, Partition};
use schurand::schur::{block_residual, build_schur_basis, SectorLayout};
use schurand::Error;
use serde::Serialize;
use serde_json::json;

use crate::exit;
use crate::output::{num, Table};
use crate::{CodeArgs, CodeModeArg, DimsArgs, HaarArgs, OtocArgs, OtocModeArg, QntkArgs, RhoArg, SchurArgs};

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Invalid(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Invalid(m) => write!(f, "invalid arguments: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => exit::INVALID,
            CliError::Io(_) => exit::IO,
            CliError::Lib(e) => match e {
                Error::Budget { .. } => exit::BUDGET,
                Error::Unsupported(_) => exit::UNSUPPORTED,
                Error::Io(_) | Error::Format(_) => exit::IO,
                Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::Overflow(_) => exit::INVALID,
            },
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Arguments plus the worker count, which affects sampled output.
#[derive(Serialize)]
struct Config<'a, T: Serialize> {
    #[serde(flatten)]
    args: &'a T,
    threads: usize,
}

fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| CliError::Invalid("--seed is required for sampling".into()))
}

fn check_qudits(n: usize, d: usize) -> Result<()> {
    if n == 0 || d < 2 {
        return Err(CliError::Invalid(format!("need n >= 1 and d >= 2, got n={n}, d={d}")));
    }
    Ok(())
}

pub fn dims(a: &DimsArgs) -> Result<()> {
    check_qudits(a.n, a.d)?;
    let secs = sectors(a.n, a.d)?;
    let mut table = Table::new("dims", a, "lambda,dim,mult,product");
    let mut total: u128 = 0;
    for s in &secs {
        let product = s.dim.checked_mul(s.mult).ok_or(Error::Overflow("sector product"))?;
        total += product;
        table.row(&[s.lambda.to_string(), s.dim.to_string(), s.mult.to_string(), product.to_string()]);
    }
    let expected = (a.d as u128).checked_pow(a.n as u32).ok_or(Error::Overflow("d^n"))?;
    if total != expected {
        return Err(Error::InvalidInput(format!("sector sum {total} differs from d^n = {expected}")).into());
    }
    table.row(&["total".into(), String::new(), String::new(), total.to_string()]);
    table.emit(a.out.as_deref(), &format!("{} sectors, sum of dim*mult = {total} = {}^{}", secs.len(), a.d, a.n))?;
    Ok(())
}

pub fn schur(a: &SchurArgs) -> Result<()> {
    check_qudits(a.n, a.d)?;
    let basis = build_schur_basis(a.n, a.d)?;
    let residual = block_residual(&basis)?;
    if let Some(path) = &a.save {
        basis.save(path)?;
    }
    let summary = format!("dimension {}, {} sectors, block residual {residual:e}", basis.dim(), basis.layout().sectors.len());
    let mut table;
    if a.print_blocks {
        table = Table::new("schur", a, "lambda,generator,row,col,value");
        for s in &basis.layout().sectors {
            let rep = IrrepBlockRep::new(&s.lambda);
            for (j, g) in rep.generators().iter().enumerate() {
                for row in 0..g.nrows() {
                    for col in 0..g.ncols() {
                        table.row(&[s.lambda.to_string(), (j + 1).to_string(), row.to_string(), col.to_string(), num(g[(row, col)])]);
                    }
                }
            }
        }
    } else {
        table = Table::new("schur", a, "lambda,dim,mult,offset");
        for s in &basis.layout().sectors {
            table.row(&[s.lambda.to_string(), s.dim.to_string(), s.mult.to_string(), s.offset.to_string()]);
        }
    }
    table.trailer("residual", &json!({ "block_residual": residual }));
    table.emit(a.out.as_deref(), &summary)?;
    Ok(())
}

pub fn haar_sample(a: &HaarArgs) -> Result<()> {
    check_qudits(a.n, a.d)?;
    let seed = require_seed(a.seed)?;
    let layout = SectorLayout::new(a.n, a.d)?;
    let mut table = Table::new("haar-sample", a, "sample,lambda,dim,trace_re,trace_im,checksum,defect");
    let mut worst = 0f64;
    for i in 0..a.count {
        let u = SymmetricUnitary::sample_with(&layout, &mut RngStream::new(seed, i as u64).rng());
        worst = worst.max(u.unitarity_defect());
        for (s, block) in layout.sectors.iter().zip(&u.blocks) {
            let tr = block.trace();
            // position-weighted sum, sensitive to any entry changing
            let checksum: f64 = block.iter().enumerate().map(|(idx, z)| (idx + 1) as f64 * (z.re + 0.5 * z.im)).sum();
            table.row(&[
                i.to_string(),
                s.lambda.to_string(),
                s.dim.to_string(),
                num(tr.re),
                num(tr.im),
                num(checksum),
                num(schurand::linalg::unitarity_defect(block)),
            ]);
        }
    }
    table.emit(a.out.as_deref(), &format!("{} samples over {} sectors, worst unitarity defect {worst:e}", a.count, layout.sectors.len()))?;
    Ok(())
}

pub fn otoc(a: &OtocArgs, threads: usize) -> Result<()> {
    let mode = match a.mode {
        OtocModeArg::Sym => OtocMode::SymmetricExchange,
        OtocModeArg::Pauli => OtocMode::PauliChargeDensity,
    };
    let eval = match a.samples {
        Some(samples) => Evaluation::MonteCarlo { samples, seed: require_seed(a.seed)?, threads },
        None => Evaluation::Exact,
    };
    let sweep = scaling_sweep(a.n_min, a.n_max, a.d, mode, a.r, eval)?;
    let mut table = Table::new("otoc", &Config { args: a, threads }, "n,d,mode,r,F,stderr,n_samples,seed");
    for r in &sweep.rows {
        table.row(&[
            r.n.to_string(),
            r.d.to_string(),
            r.mode.to_string(),
            r.r.to_string(),
            num(r.value),
            num(r.stderr),
            r.n_samples.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]);
    }
    let fit = json!({ "slope": sweep.fit.slope, "intercept": sweep.fit.intercept, "r2": sweep.fit.r2 });
    table.trailer("fit", &fit);
    table.emit(a.out.as_deref(), &fit.to_string())?;
    Ok(())
}

pub fn code(a: &CodeArgs, threads: usize) -> Result<()> {
    if a.d < 2 {
        return Err(CliError::Invalid(format!("need d >= 2, got {}", a.d)));
    }
    let mode = match a.mode {
        CodeModeArg::Avg => "avg",
        CodeModeArg::Sample => "sample",
        CodeModeArg::Fig2 => "fig2",
        CodeModeArg::Mi => "mi",
    };
    let mut table = Table::new("code", &Config { args: a, threads }, "n,k,d,mode,value,stderr,approx");
    let mut push = |n: usize, value: f64, stderr: f64, approx: Option<f64>| {
        table.row(&[
            n.to_string(),
            a.k.to_string(),
            a.d.to_string(),
            mode.to_string(),
            num(value),
            num(stderr),
            approx.map(num).unwrap_or_default(),
        ]);
    };
    let summary = match a.mode {
        CodeModeArg::Avg => {
            let b = choi_error_bound(a.n, a.k, a.d)?;
            push(a.n, b.exact, 0.0, Some(b.approx));
            format!("P(rho_avg, flat) = {:e}, approx {:e}", b.exact, b.approx)
        }
        CodeModeArg::Sample => {
            let samples = a.samples.ok_or_else(|| CliError::Invalid("--samples is required in sample mode".into()))?;
            let ens = Ensemble::Haar { samples, seed: require_seed(a.seed)?, threads };
            let basis = build_schur_basis(a.n, a.d)?;
            let s = sampled_choi_error(&CodeInstance::standard(a.n, a.k, a.d)?, &basis, ens)?;
            push(a.n, s.direct.mean, s.direct.stderr, Some(approx_bound(a.n, a.k, a.d)));
            format!("mean P(rho, flat) = {:e} +- {:e} over {samples} samples", s.direct.mean, s.direct.stderr)
        }
        CodeModeArg::Fig2 => {
            let sweep = figure2_sweep(a.k, &a.n_list, a.d)?;
            for r in &sweep.rows {
                push(r.n, r.exact, 0.0, Some(r.approx));
            }
            let fit = json!({ "slope": sweep.fit.slope, "intercept": sweep.fit.intercept, "r2": sweep.fit.r2 });
            let closed: Vec<f64> = sweep.rows.iter().map(|r| r.closed_form).collect();
            table.trailer("fit", &fit);
            table.trailer("closed_form", &json!(closed));
            fit.to_string()
        }
        CodeModeArg::Mi => {
            let mode = match a.samples {
                Some(samples) => MiMode::MonteCarlo { samples, seed: require_seed(a.seed)?, threads },
                None => MiMode::Exact,
            };
            let basis = build_schur_basis(a.n, a.d)?;
            let e = renyi2_mi_bound(&basis, a.k, a.t, mode)?;
            push(a.n, e.mean, e.stderr, None);
            format!("Renyi-2 mutual information bound {:e} +- {:e}", e.mean, e.stderr)
        }
    };
    table.emit(a.out.as_deref(), &summary)?;
    Ok(())
}

pub fn qntk(a: &QntkArgs, threads: usize) -> Result<()> {
    let lambda: Partition = a.lambda.parse()?;
    if lambda.n() != a.n {
        return Err(CliError::Invalid(format!("--lambda {} is a partition of {}, not --n {}", lambda, lambda.n(), a.n)));
    }
    if a.layers == 0 {
        return Err(CliError::Invalid("--layers must be at least 1".into()));
    }
    let seed = require_seed(a.seed)?;
    let init = match a.rho {
        RhoArg::Gt => InitialState::FirstTableau,
        RhoArg::Mixed => InitialState::MaximallyMixed,
    };
    let mut problem = LearningProblem::heisenberg(&lambda, a.d, init, 1.0)?;
    if let Some(target) = a.target {
        problem.target = target;
    }
    let mut ansatz = CqaAnsatz::random(&lambda, a.layers, &mut RngStream::new(seed, 0).rng());
    let kbar = qntk_average_for_state(&problem.observable, &ansatz.generators(), &problem.rho)?;
    problem.eta = match a.eta {
        Some(eta) if eta > 0.0 && eta.is_finite() => eta,
        Some(eta) => return Err(CliError::Invalid(format!("--eta must be positive, got {eta}"))),
        None if kbar > 0.0 => 0.5 / kbar,
        None => return Err(CliError::Invalid("the average kernel vanishes for this state; pass --eta".into())),
    };
    let traj = train(&mut ansatz, &problem, a.steps)?;
    if let Some(w) = &traj.warning {
        eprintln!("warning: {w}");
    }
    let mut table = Table::new("qntk", &Config { args: a, threads }, "t,eps,K");
    for s in &traj.steps {
        table.row(&[s.t.to_string(), num(s.eps), num(s.k)]);
    }
    let eta_k = problem.eta * traj.kbar;
    let summary = json!({
        "kbar": traj.kbar,
        "heuristic_kbar": heuristic_kbar(a.n - 1, ansatz.num_params(), ansatz.dim()),
        "fitted_rate": traj.log_rate(),
        "predicted_rate": if eta_k < 1.0 { (1.0 - eta_k).ln() } else { f64::NAN },
        "eta": problem.eta,
        "params": ansatz.num_params(),
        "kernel_spread": traj.kernel_spread(),
        "diverged": traj.diverged,
    });
    table.trailer("summary", &summary);
    table.emit(a.out.as_deref(), &summary.to_string())?;
    Ok(())
}
