//! `lu-equiv`: invariants, equivalence checks, fixtures and property suites.
//!
//! Exit codes: 0 equivalent, 1 inequivalent, 2 out of class, 3 runtime
//! error, 4 usage error. Commands that only print data exit 0 on success.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lu_equiv::class_f::{
    compute_invariants_f, decide_equivalence_f, decide_equivalence_f_supplied, DecideOptions, SigmaOptions, SigmaRule,
};
use lu_equiv::class_g::{
    compute_invariants_g, d_computable_fixture, decide_equivalence_g, detect_class_g, DComputableParams,
};
use lu_equiv::fixtures::{werner_ensemble, werner_state};
use lu_equiv::io::{
    read_json, to_json, InvariantsFJson, InvariantsGJson, LoadedState, PairJson, StateFile, VerdictJson,
};
use lu_equiv::multipartite::{peeling_stages, staged_equivalence, MultipartiteState};
use lu_equiv::random::{generate, RandomSpec};
use lu_equiv::scalar::{cis, cplx};
use lu_equiv::state::{eigen_decompose, DensityMatrix, EigenEnsemble};
use lu_equiv::suite::{run_suites, SuiteConfig};
use lu_equiv::{decide_auto, Error, EquivalenceVerdictF64, TolerancesF64, Verdict};

#[derive(Parser)]
#[command(name = "lu-equiv", version, about = "Local unitary equivalence of bipartite mixed states")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    F,
    G,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaArg {
    /// `listing` for files that carry their own decomposition, else `matched`.
    Auto,
    Matched,
    Listing,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the invariant set of a state as JSON.
    Invariants {
        state: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        class: ClassArg,
        #[arg(long, value_enum, default_value = "auto")]
        sigma: SigmaArg,
        #[arg(long)]
        allow_large: bool,
    },
    /// Decide whether two states are LU-equivalent.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        class: ClassArg,
        /// Write the witness pair here when the states are equivalent.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Local frame change (pair JSON) applied before the class-G test.
        #[arg(long)]
        w_conj: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Emit a random state file, e.g. `--spec n=3,rank=2,seed=7,class=F`.
    Gen {
        #[arg(long, default_value = "")]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a closed-form state file.
    Fixture {
        #[command(subcommand)]
        which: FixtureCmd,
    },
    /// Run the property suites and print a TSV summary.
    Suite {
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Test hook: corrupt one path ratio per round-trip case.
        #[arg(long, hide = true)]
        inject_bug: bool,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    /// Werner state with its textbook decomposition.
    Werner {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mixture of two orthogonal d-computable pure states on 4 x 4.
    Dcomp {
        /// `theta=..,phi=..,mu=..`: first state from `x = (cos θ, e^{iφ} sin θ)`,
        /// second from the vector orthogonal to `x`.
        #[arg(long, default_value = "theta=0.4,phi=0.9,mu=0.7")]
        params: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the frame change `T ⊗ I` as a pair file.
        #[arg(long)]
        w_out: Option<PathBuf>,
    },
}

type CliResult = std::result::Result<ExitCode, String>;

fn tolerances() -> std::result::Result<TolerancesF64, String> {
    let tol = TolerancesF64::default();
    match std::env::var("LU_EQUIV_TOL") {
        Err(_) => Ok(tol),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(eq) if eq.is_finite() && eq > 0.0 => Ok(tol.with_eq(eq)),
            _ => Err(format!("LU_EQUIV_TOL must be a positive number, got `{s}`")),
        },
    }
}

fn read_state(path: &Path, tol: &TolerancesF64) -> std::result::Result<LoadedState, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: StateFile = read_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    file.load(tol).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> std::result::Result<(), String> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn bipartite(
    loaded: LoadedState,
    what: &str,
) -> std::result::Result<(DensityMatrix<f64>, Option<EigenEnsemble<f64>>), String> {
    match loaded {
        LoadedState::Bipartite { state, ensemble } => Ok((state, ensemble)),
        LoadedState::Multipartite(_) => Err(format!("{what} needs a bipartite state file")),
    }
}

fn ensemble_for(
    state: &DensityMatrix<f64>,
    supplied: Option<EigenEnsemble<f64>>,
    tol: &TolerancesF64,
) -> std::result::Result<EigenEnsemble<f64>, Error> {
    let ens = supplied.unwrap_or_else(|| eigen_decompose(state, tol.rank_cut, tol));
    if !ens.is_supplied() && ens.is_degenerate() {
        return Err(Error::Invalid("degenerate spectrum: the eigenbasis is not determined by the state".into()));
    }
    Ok(ens)
}

fn invariants(state: &Path, class: ClassArg, sigma: SigmaArg, allow_large: bool) -> CliResult {
    let tol = tolerances()?;
    let (rho, supplied) = bipartite(read_state(state, &tol)?, "invariants")?;
    let ens = ensemble_for(&rho, supplied, &tol);
    let rule = match sigma {
        SigmaArg::Matched => SigmaRule::EndpointMatched,
        SigmaArg::Listing => SigmaRule::PairListing,
        SigmaArg::Auto => match &ens {
            Ok(e) if e.is_supplied() => SigmaRule::PairListing,
            _ => SigmaRule::EndpointMatched,
        },
    };
    let opts = SigmaOptions { rule, allow_large };
    let as_f = || -> std::result::Result<String, Error> {
        let e = ens.clone()?;
        Ok(to_json(&InvariantsFJson::from(&compute_invariants_f(&e, &opts, &tol)?)))
    };
    let as_g = || -> std::result::Result<String, Error> {
        let e = ens.clone()?;
        Ok(to_json(&InvariantsGJson::from(&compute_invariants_g(&detect_class_g(&e, &tol)?, &tol))))
    };
    let text = match class {
        ClassArg::F => as_f().map_err(|e| format!("class F: {e}"))?,
        ClassArg::G => as_g().map_err(|e| format!("class G: {e}"))?,
        ClassArg::Auto => match as_f() {
            Ok(t) => t,
            Err(ef) => as_g().map_err(|eg| format!("not in class F ({ef}) nor class G ({eg})"))?,
        },
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn exit_for(v: Verdict) -> ExitCode {
    ExitCode::from(v.exit_code() as u8)
}

fn compare(
    a: &Path,
    b: &Path,
    class: ClassArg,
    witness: Option<&Path>,
    w_conj: Option<&Path>,
    allow_large: bool,
) -> CliResult {
    let tol = tolerances()?;
    let opts = DecideOptions { allow_large };
    let (la, lb) = (read_state(a, &tol)?, read_state(b, &tol)?);
    if let (LoadedState::Multipartite(sa), LoadedState::Multipartite(sb)) = (&la, &lb) {
        return compare_multipartite(sa, sb, &opts, &tol);
    }
    let (ra, ea) = bipartite(la, "compare")?;
    let (rb, eb) = bipartite(lb, "compare")?;
    let w = match w_conj {
        None => None,
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let pair: PairJson = read_json(&text).map_err(|e| e.to_string())?;
            Some(pair.to_pair(&tol).map_err(|e| format!("{}: {e}", p.display()))?)
        }
    };
    let supplied = match (ea, eb) {
        (Some(x), Some(y)) => Some((x, y)),
        _ => None,
    };
    let decide_f = || match &supplied {
        Some((x, y)) => decide_equivalence_f_supplied(x, y, &opts, &tol),
        None => decide_equivalence_f(&ra, &rb, &opts, &tol),
    };
    let verdict: EquivalenceVerdictF64 = match (class, &w) {
        (ClassArg::G, _) | (ClassArg::Auto, Some(_)) => decide_equivalence_g(&ra, &rb, w.as_ref(), &tol),
        (ClassArg::F, None) => decide_f(),
        (ClassArg::F, Some(_)) => return Err("--w-conj applies to the class G test only".into()),
        (ClassArg::Auto, None) if supplied.is_some() => match decide_f() {
            Ok(v) if v.verdict == Verdict::OutOfClass => decide_equivalence_g(&ra, &rb, None, &tol),
            other => other,
        },
        (ClassArg::Auto, None) => decide_auto(&ra, &rb, &opts, &tol),
    }
    .map_err(|e| e.to_string())?;
    if let (Some(path), Some(pair)) = (witness, &verdict.witness) {
        write_or_print(Some(path), &to_json(&PairJson::from_pair(pair)))?;
    }
    println!("{}", to_json(&VerdictJson::from(&verdict)));
    Ok(exit_for(verdict.verdict))
}

fn compare_multipartite(
    a: &MultipartiteState<f64>,
    b: &MultipartiteState<f64>,
    opts: &DecideOptions,
    tol: &TolerancesF64,
) -> CliResult {
    let staged = staged_equivalence(a, b, &peeling_stages(a.parties()), opts, tol).map_err(|e| e.to_string())?;
    let stages: Vec<serde_json::Value> = staged
        .stages
        .iter()
        .map(|r| {
            serde_json::json!({
                "stage": r.stage.label(),
                "unequal_cut": r.unequal_cut,
                "verdict": r.verdict.as_ref().map(VerdictJson::from),
                "error": r.error,
            })
        })
        .collect();
    let out = serde_json::json!({
        "stages": stages,
        "all_stages_equivalent": staged.all_stages_equivalent,
        "any_inequivalent": staged.any_inequivalent,
        "conclusion": staged.conclusion,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json value"));
    Ok(if staged.any_inequivalent {
        exit_for(Verdict::Inequivalent)
    } else if staged.all_stages_equivalent {
        exit_for(Verdict::Equivalent)
    } else {
        exit_for(Verdict::OutOfClass)
    })
}

fn gen(spec: &str, out: Option<&Path>) -> CliResult {
    let spec: RandomSpec = spec.parse().map_err(|e: Error| e.to_string())?;
    let (rho, _) = generate::<f64>(&spec).map_err(|e| e.to_string())?;
    write_or_print(out, &to_json(&StateFile::bipartite(&rho, None)))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_dcomp(params: &str) -> std::result::Result<(f64, f64, f64), String> {
    let (mut theta, mut phi, mut mu) = (0.4, 0.9, 0.7);
    for part in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let x: f64 = v.trim().parse().map_err(|_| format!("bad value for {k}: `{v}`"))?;
        match k.trim() {
            "theta" => theta = x,
            "phi" => phi = x,
            "mu" => mu = x,
            other => return Err(format!("unknown dcomp parameter `{other}`")),
        }
    }
    Ok((theta, phi, mu))
}

fn fixture(which: &FixtureCmd) -> CliResult {
    let tol = tolerances()?;
    match which {
        FixtureCmd::Werner { p, out } => {
            if !(0.0..1.0).contains(p) {
                return Err(format!("p must lie in [0, 1), got {p}"));
            }
            let file = StateFile::bipartite(&werner_state(*p), Some(&werner_ensemble(*p)));
            write_or_print(out.as_deref(), &to_json(&file))?;
        }
        FixtureCmd::Dcomp { params, out, w_out } => {
            let (theta, phi, mu) = parse_dcomp(params)?;
            let x = [cplx(theta.cos(), 0.0), cis(phi) * theta.sin()];
            let y = [-x[1].conj(), x[0].conj()];
            let (rho, w) =
                d_computable_fixture(&DComputableParams::rank_one(x), &DComputableParams::rank_one(y), mu, &tol)
                    .map_err(|e| e.to_string())?;
            write_or_print(out.as_deref(), &to_json(&StateFile::bipartite(&rho, None)))?;
            if let Some(p) = w_out {
                write_or_print(Some(p), &to_json(&PairJson::from_pair(&w)))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn suite(cases: usize, seed: u64, jobs: Option<usize>, inject_bug: bool) -> CliResult {
    let tol = tolerances()?;
    let summary =
        run_suites(&SuiteConfig { cases, seed, jobs, inject_bug }, &tol).map_err(|e| e.to_string())?;
    print!("{}", summary.to_tsv());
    Ok(if summary.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.cmd {
        Cmd::Invariants { state, class, sigma, allow_large } => invariants(state, *class, *sigma, *allow_large),
        Cmd::Compare { a, b, class, witness, w_conj, allow_large } => {
            compare(a, b, *class, witness.as_deref(), w_conj.as_deref(), *allow_large)
        }
        Cmd::Gen { spec, out } => gen(spec, out.as_deref()),
        Cmd::Fixture { which } => fixture(which),
        Cmd::Suite { cases, seed, jobs, inject_bug } => suite(*cases, *seed, *jobs, *inject_bug),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
