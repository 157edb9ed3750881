//! The `omval` command line: factor polynomials over `Q_p`, evaluate `v_F`,
//! test Okutsu equivalence and inspect Newton polygons and residual
//! polynomials of a chain valuation.

mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use omval_core::{
    is_key, newton_polygon, okutsu_report, om_factor_with, prime_leaf, principal_part, rational_from_str,
    residual_poly, value_of, ChainFile, Error, ExtRational, FactorOptions, InductiveValuation, OMLeaf, RatPoly,
    Rational,
};
use serde_json::json;

/// Exit status for success, internal failures and invalid input.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "omval", version, about = "OM factorization and inductive valuations over Q_p")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Salt for the pseudorandom splitting of residual polynomials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor monic integral squarefree polynomials over Q_p.
    Factor(FactorArgs),
    /// Value v_F(G) for a polynomial F irreducible over Q_p.
    Value(PairArgs),
    /// Decide whether two prime polynomials are Okutsu equivalent.
    Equiv(PairArgs),
    /// Newton polygon of F with respect to a chain valuation and a key polynomial.
    Polygon(PolygonArgs),
    /// Residual polynomial of F at the top level of a chain valuation.
    Residual(ResidualArgs),
}

#[derive(Args, Debug)]
struct PrimeArg {
    /// The prime p.
    #[arg(short = 'p', long = "prime")]
    prime: u64,
}

#[derive(Args, Debug)]
struct FactorArgs {
    #[command(flatten)]
    prime: PrimeArg,

    /// Polynomials in x, e.g. "x^4+2*x^3+3*x^2+2*x-1"; put "--" before one
    /// that starts with a minus sign.
    #[arg(required = true)]
    polys: Vec<String>,

    /// Refine approximate leaves until v_F(phi) exceeds this rational.
    #[arg(long)]
    precision: Option<String>,

    /// Number of polynomials factored concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[command(flatten)]
    prime: PrimeArg,

    f: String,

    g: String,
}

#[derive(Args, Debug)]
struct PolygonArgs {
    /// Chain file: {"prime": p, "levels": [{"phi": "x", "gamma": "1/2"}, ...]}.
    #[arg(long)]
    chain: PathBuf,

    /// Key polynomial; defaults to the top key polynomial of the chain.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,

    f: String,
}

#[derive(Args, Debug)]
struct ResidualArgs {
    #[arg(long)]
    chain: PathBuf,

    f: String,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// status. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let (code, msg) = match &e {
                Error::InvalidArgument(m) => (EXIT_INVALID, m.clone()),
                Error::Parse { .. } => (EXIT_INVALID, e.to_string()),
                Error::Internal(_) => (EXIT_INTERNAL, e.to_string()),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> omval_core::Result<()> {
    let text = match &cli.command {
        Command::Factor(a) => factor(cli, a)?,
        Command::Value(a) => value(cli, a)?,
        Command::Equiv(a) => equiv(cli, a)?,
        Command::Polygon(a) => polygon(cli, a)?,
        Command::Residual(a) => residual(cli, a)?,
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::Internal(format!("cannot write output: {e}")))
}

fn parse_poly(s: &str) -> omval_core::Result<RatPoly> {
    RatPoly::parse(s)
}

fn parse_rational(s: &str) -> omval_core::Result<Rational> {
    rational_from_str(s)
}

fn to_json_string(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

struct Factored {
    poly: RatPoly,
    leaves: Vec<OMLeaf>,
}

fn factor_one(text: &str, p: u64, options: &FactorOptions, precision: Option<&Rational>) -> omval_core::Result<Factored> {
    let poly = parse_poly(text)?;
    let mut leaves = om_factor_with(&poly, p, options)?;
    if let Some(nu) = precision {
        for leaf in &mut leaves {
            if leaf.certified_value() <= &ExtRational::Finite(nu.clone()) {
                leaf.improve(nu)?;
            }
        }
    }
    Ok(Factored { poly, leaves })
}

fn factor(cli: &Cli, a: &FactorArgs) -> omval_core::Result<String> {
    let p = a.prime.prime;
    let precision = a.precision.as_deref().map(parse_rational).transpose()?;
    let options = FactorOptions { seed: cli.seed, ..FactorOptions::default() };
    let results = run_jobs(&a.polys, a.jobs.max(1), |s| factor_one(s, p, &options, precision.as_ref()));
    let results: Vec<Factored> = results.into_iter().collect::<omval_core::Result<_>>()?;
    if cli.json {
        let docs: Vec<serde_json::Value> = results
            .iter()
            .map(|r| {
                json!({
                    "polynomial": r.poly.to_string(),
                    "prime": p,
                    "leaves": r.leaves.iter().map(|l| serde_json::to_value(l.to_json()).expect("leaf serializes")).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = if docs.len() == 1 { docs.into_iter().next().unwrap() } else { serde_json::Value::Array(docs) };
        return Ok(to_json_string(&doc));
    }
    let mut s = String::new();
    for r in &results {
        s.push_str(&render::factorization(&r.poly, p, &r.leaves));
    }
    Ok(s)
}

/// Applies `work` to every input on `jobs` threads; results keep input order.
fn run_jobs<T: Send>(inputs: &[String], jobs: usize, work: impl Fn(&str) -> T + Sync) -> Vec<T> {
    if jobs <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(|s| work(s)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = inputs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(inputs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= inputs.len() {
                    break;
                }
                let r = work(&inputs[i]);
                *slots[i].lock().expect("result slot") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("result slot").expect("every job ran")).collect()
}

fn value(cli: &Cli, a: &PairArgs) -> omval_core::Result<String> {
    let p = a.prime.prime;
    let f = parse_poly(&a.f)?;
    let g = parse_poly(&a.g)?;
    let leaf = prime_leaf(&f, p)?;
    let v = value_of(&leaf, &g)?;
    if cli.json {
        return Ok(to_json_string(&json!({
            "f": f.to_string(),
            "g": g.to_string(),
            "prime": p,
            "value": v.to_string(),
        })));
    }
    Ok(format!("{v}\n"))
}

fn equiv(cli: &Cli, a: &PairArgs) -> omval_core::Result<String> {
    let p = a.prime.prime;
    let f = parse_poly(&a.f)?;
    let g = parse_poly(&a.g)?;
    let rep = okutsu_report(&f, &g, p)?;
    if cli.json {
        return Ok(to_json_string(&json!({
            "f": f.to_string(),
            "g": g.to_string(),
            "prime": p,
            "equivalent": rep.equivalent,
            "value": rep.value.as_ref().map(|v| v.to_string()),
            "okutsu_bound": rep.bound.as_ref().map(|b| b.to_string()),
        })));
    }
    let verdict = if rep.equivalent { "equivalent" } else { "not equivalent" };
    let reason = match (&rep.value, &rep.bound) {
        (None, _) => format!("degrees {} and {} differ", f.deg(), g.deg()),
        (Some(v), None) => format!("v_F(G)={v}, linear factors"),
        (Some(v), Some(b)) => {
            let op = if rep.equivalent { ">" } else { "<=" };
            format!("v_F(G)={v} {op} delta0={b}")
        }
    };
    Ok(format!("{verdict} ({reason})\n"))
}

fn load_chain(path: &Path) -> omval_core::Result<InductiveValuation> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read chain file {}: {e}", path.display())))?;
    InductiveValuation::from_chain(&ChainFile::from_json(&text)?)
}

fn polygon(cli: &Cli, a: &PolygonArgs) -> omval_core::Result<String> {
    let mu = load_chain(&a.chain)?;
    let f = parse_poly(&a.f)?;
    if f.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial has an empty polygon".into()));
    }
    let phi = match &a.phi {
        Some(s) => parse_poly(s)?,
        None => mu.top().phi().clone(),
    };
    if !phi.is_monic() || phi.deg() == 0 || !is_key(&mu, &phi)?.is_key {
        return Err(Error::InvalidArgument(format!("{phi} is not a key polynomial for the chain valuation")));
    }
    let n = newton_polygon(&mu, &phi, &f)?;
    let cutoff = mu.value(&phi).expect_finite("value of a key polynomial")?;
    let pp = principal_part(&n, &cutoff);
    let cloud = omval_core::newton::cloud(&mu, &phi, &f)?;
    if cli.json {
        return Ok(to_json_string(&json!({
            "f": f.to_string(),
            "phi": phi.to_string(),
            "mu_phi": cutoff.to_string(),
            "ord_phi": n.ord(),
            "length": n.length(),
            "vertices": render::points_json(n.vertices()),
            "slopes": n.slopes().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "principal": {
                "vertices": render::points_json(pp.vertices()),
                "slopes": pp.slopes().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            },
            "cloud": render::points_json(&cloud),
        })));
    }
    Ok(render::polygon(&f, &phi, &cutoff, &n, &pp, &cloud))
}

fn residual(cli: &Cli, a: &ResidualArgs) -> omval_core::Result<String> {
    let mu = load_chain(&a.chain)?;
    let f = parse_poly(&a.f)?;
    if f.is_zero() {
        return Err(Error::InvalidArgument("the residual polynomial of zero is undefined".into()));
    }
    let res = residual_poly(&mu, &f)?;
    let k = mu.tower().field(mu.depth());
    let tower: Vec<String> = (0..mu.depth()).map(|i| mu.tower().field(i).format_poly(mu.tower().modulus(i))).collect();
    let r = k.format_poly(&res.r);
    if cli.json {
        return Ok(to_json_string(&json!({
            "f": f.to_string(),
            "residual": r,
            "degree": res.r.degree(),
            "s": res.s,
            "s_end": res.s_end,
            "value": res.value.to_string(),
            "tower": tower,
        })));
    }
    let mut s = format!("R(f) = {r}\n");
    s.push_str(&format!("degree {}, s = {}, s' = {}, mu(f) = {}\n", res.r.degree().unwrap_or(0), res.s, res.s_end, res.value));
    if tower.is_empty() {
        s.push_str(&format!("over F_{}\n", mu.prime().get()));
    } else {
        for (i, psi) in tower.iter().enumerate() {
            s.push_str(&format!("z{i} is a root of {psi}\n"));
        }
    }
    Ok(s)
}
