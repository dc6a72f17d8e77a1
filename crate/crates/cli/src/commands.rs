use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use parsum::classify::{
    min_annihilator, orbit_decomposition, sigma_equivalent_bounded, split_factored, EquivalenceResult, FactorClass,
    SplitFactorization,
};
use parsum::field::ShiftSystem;
use parsum::multipoly::{factor_t, FactoredPoly, TFactorization, TPoly, TRat};
use parsum::specials::{cfinite_specials, find_linear_specials};
use parsum::telescope::{normal_denominator_bound_factored, parallel_sum_factored, verify, TelescopeConfig, TelescopeResult};

use crate::parse::parse_expression;
use crate::problem::{parse_problem, summand_with_factors, InputError, Problem};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "parsum", version, about = "Decide and solve parallel summation in difference fields")]
pub struct Cli {
    /// One key=value record per line
    #[arg(long, global = true)]
    pub machine: bool,
    /// Take `denfactors` entries as irreducible instead of factoring them
    #[arg(long, global = true)]
    pub factored_input: bool,
    /// Cap on the t-degree of the numerator ansatz
    #[arg(long, global = true, value_name = "N")]
    pub max_t_degree: Option<u32>,
    /// Cap on the x-degree of the numerator coefficients
    #[arg(long, global = true, value_name = "N")]
    pub max_x_degree: Option<u32>,
    /// Extra multiplicity allowed for special factors
    #[arg(long, global = true, value_name = "N")]
    pub special_slack: Option<usize>,
    /// Shift range searched when exact equivalence is unavailable
    #[arg(long, global = true, value_name = "N")]
    pub max_shift_scan: Option<i64>,
    /// Do not add specials of the field to the denominator guess
    #[arg(long, global = true)]
    pub no_discover_specials: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct PolyArg {
    /// Problem file
    pub problem: PathBuf,
    /// Polynomial to use instead of the summand's denominator
    #[arg(long)]
    pub poly: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Split a polynomial into special and normal irreducible factors
    Classify(PolyArg),
    /// Find i and u with sigma^i(p) = u q
    Equiv { problem: PathBuf, p: String, q: String },
    /// Dispersion of the normal part of a polynomial
    Disp(PolyArg),
    /// Denominator bound for the normal part of a telescoper
    Bound {
        #[command(flatten)]
        target: PolyArg,
        /// Bound index; defaults to the dispersion minus one
        #[arg(long, allow_negative_numbers = true)]
        d: Option<i64>,
    },
    /// Linear special polynomials of the field
    Specials {
        problem: PathBuf,
        /// Largest power of sigma to consider; defaults to n
        #[arg(long)]
        max_s: Option<usize>,
    },
    /// Find g with sigma(g) - g = f
    Sum {
        problem: PathBuf,
        /// Summand to use instead of the one in the problem file
        #[arg(long)]
        summand: Option<String>,
    },
    /// Check sigma(g) - g = f
    Verify {
        problem: PathBuf,
        g: String,
        /// Summand to use instead of the one in the problem file
        #[arg(long)]
        summand: Option<String>,
    },
}

/// Formats results either as `label: value` or as `key=value`.
struct Report {
    machine: bool,
    text: String,
}

impl Report {
    fn put(&mut self, key: &str, label: &str, value: impl Display) {
        let line = if self.machine { format!("{}={}\n", key, value) } else { format!("{}: {}\n", label, value) };
        self.text.push_str(&line);
    }

    fn human(&mut self, line: impl Display) {
        if !self.machine {
            self.text.push_str(&format!("{}\n", line));
        }
    }
}

struct Context {
    problem: Problem,
    sys: ShiftSystem,
    config: TelescopeConfig,
    factored_input: bool,
}

impl Context {
    fn names(&self) -> &[String] {
        &self.problem.field.names
    }

    fn n(&self) -> usize {
        self.problem.field.n
    }

    fn show_poly(&self, p: &TPoly) -> String {
        p.display_with(self.names()).to_string()
    }

    fn show_rat(&self, f: &TRat) -> String {
        f.display_with(self.names()).to_string()
    }

    fn show_factored(&self, unit: &parsum::XRat, factors: &[(TPoly, usize)]) -> String {
        let mut parts = Vec::new();
        if !unit.is_one() || factors.is_empty() {
            parts.push(if unit.is_constant() { unit.to_string() } else { format!("({})", unit) });
        }
        for (p, m) in factors {
            let base = format!("({})", self.show_poly(p));
            parts.push(if *m == 1 { base } else { format!("{}^{}", base, m) });
        }
        parts.join("*")
    }

    fn polynomial(&self, text: &str) -> Result<TPoly, InputError> {
        let v = parse_expression(text, self.names())?;
        if !v.is_polynomial() {
            return Err(InputError::Io(format!("'{}' is not a polynomial", text)));
        }
        Ok(v.num().clone())
    }

    fn summand(&self, text: Option<&str>) -> Result<(TRat, TFactorization), InputError> {
        match text {
            Some(t) => {
                let f = parse_expression(t, self.names())?;
                let den = factor_t(f.den(), &self.config.factor_caps)?;
                Ok((f, den))
            }
            None => {
                let s = self.problem.summand.as_ref().ok_or(InputError::Io("the problem has no [summand]".into()))?;
                summand_with_factors(s, self.n(), self.factored_input, &self.config.factor_caps)
            }
        }
    }

    /// The `--poly` argument or the summand's denominator, factored.
    fn target(&self, poly: Option<&str>) -> Result<TFactorization, InputError> {
        match poly {
            Some(t) => Ok(factor_t(&self.polynomial(t)?, &self.config.factor_caps)?),
            None => Ok(self.summand(None)?.1),
        }
    }
}

fn load(cli: &Cli, path: &PathBuf) -> Result<Context, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{}: {}", path.display(), e)))?;
    let problem = parse_problem(&text).map_err(|e| InputError::Io(format!("{}:{}", path.display(), e)))?;
    let sys = problem.field.system()?;
    let mut config = TelescopeConfig::default();
    problem.config.apply(&mut config);
    if let Some(v) = cli.max_t_degree {
        config.max_t_degree = v;
    }
    if let Some(v) = cli.max_x_degree {
        config.max_x_degree = v;
    }
    if let Some(v) = cli.special_slack {
        config.special_slack = v;
    }
    if let Some(v) = cli.max_shift_scan {
        config.max_shift_scan = v;
    }
    if cli.no_discover_specials {
        config.discover_specials = false;
    }
    Ok(Context { problem, sys, config, factored_input: cli.factored_input })
}

fn show_dispersion(d: Option<i64>) -> String {
    d.map_or("-inf".to_string(), |d| d.to_string())
}

fn report_split(ctx: &Context, out: &mut Report, split: &SplitFactorization, annihilators: bool) {
    out.put("unit", "unit", &split.unit);
    out.put("factors", "factors", split.factors.len());
    for (k, (p, m, class)) in split.factors.iter().enumerate() {
        let key = format!("factor.{}", k + 1);
        if out.machine {
            out.put(&format!("{}.poly", key), "", ctx.show_poly(p));
            out.put(&format!("{}.multiplicity", key), "", m);
            match class {
                FactorClass::Special { ell, unit } => {
                    out.put(&format!("{}.class", key), "", "special");
                    out.put(&format!("{}.ell", key), "", ell);
                    out.put(&format!("{}.unit", key), "", unit);
                }
                FactorClass::Normal => out.put(&format!("{}.class", key), "", "normal"),
            }
        } else {
            let power = if *m == 1 { String::new() } else { format!("^{}", m) };
            out.human(format!("  ({}){}  {}", ctx.show_poly(p), power, class));
        }
        if annihilators {
            let l = min_annihilator(&ctx.sys, p);
            out.put(&format!("{}.annihilator", key), "    annihilator", l);
        }
    }
    out.put("special_part", "special part", ctx.show_poly(&split.special_part()));
    out.put("normal_part", "normal part", ctx.show_poly(&split.normal_part()));
}

fn normal_factored(split: &SplitFactorization) -> FactoredPoly {
    let mut v = FactoredPoly::one(split.n);
    for (p, m) in split.normal_factors() {
        v.push(p, m);
    }
    v
}

fn execute(cli: &Cli, out: &mut Report) -> Result<i32, InputError> {
    match &cli.command {
        Command::Classify(t) => {
            let ctx = load(cli, &t.problem)?;
            let split = split_factored(&ctx.sys, &ctx.target(t.poly.as_deref())?);
            report_split(&ctx, out, &split, true);
        }
        Command::Equiv { problem, p, q } => {
            let ctx = load(cli, problem)?;
            let (p, q) = (ctx.polynomial(p)?, ctx.polynomial(q)?);
            if p.is_constant() || q.is_constant() {
                return Err(InputError::Io("equiv needs non-constant polynomials".into()));
            }
            match sigma_equivalent_bounded(&ctx.sys, &p, &q, ctx.config.max_shift_scan)? {
                EquivalenceResult::Equivalent { i, u } => {
                    out.put("result", "result", "equivalent");
                    out.put("shift", "shift i", i);
                    out.put("unit", "unit u", &u);
                    out.human(format!("sigma^{}(p) = ({}) * q", i, u));
                }
                EquivalenceResult::NotEquivalent => out.put("result", "result", "not equivalent"),
            }
        }
        Command::Disp(t) => {
            let ctx = load(cli, &t.problem)?;
            let split = split_factored(&ctx.sys, &ctx.target(t.poly.as_deref())?);
            let normal: Vec<TPoly> = split.normal_factors().map(|(p, _)| p.clone()).collect();
            let table = orbit_decomposition(&ctx.sys, &normal, ctx.config.max_shift_scan)?;
            out.put("dispersion", "dispersion", show_dispersion(table.dispersion()));
            out.put("orbits", "orbits", table.orbits.len());
            for (k, orbit) in table.orbits.iter().enumerate() {
                for (j, m) in orbit.iter().enumerate() {
                    let key = format!("orbit.{}.{}", k + 1, j + 1);
                    if out.machine {
                        out.put(&format!("{}.poly", key), "", ctx.show_poly(&normal[m.index]));
                        out.put(&format!("{}.offset", key), "", m.offset);
                        out.put(&format!("{}.unit", key), "", &m.unit);
                    } else {
                        out.human(format!("  orbit {}: offset {}  {}", k + 1, m.offset, ctx.show_poly(&normal[m.index])));
                    }
                }
            }
        }
        Command::Bound { target, d } => {
            let ctx = load(cli, &target.problem)?;
            let split = split_factored(&ctx.sys, &ctx.target(target.poly.as_deref())?);
            let normal: Vec<TPoly> = split.normal_factors().map(|(p, _)| p.clone()).collect();
            let disp = orbit_decomposition(&ctx.sys, &normal, ctx.config.max_shift_scan)?.dispersion();
            let d = d.unwrap_or(disp.map_or(-1, |d| d - 1));
            let b = normal_denominator_bound_factored(&ctx.sys, &normal_factored(&split), d);
            out.put("dispersion", "dispersion", show_dispersion(disp));
            out.put("d", "d", d);
            out.put("bound", "bound", ctx.show_poly(&b.expand()));
            out.put("bound_factored", "factored", ctx.show_factored(&b.unit, &b.factors));
        }
        Command::Specials { problem, max_s } => {
            let ctx = load(cli, problem)?;
            let max_s = max_s.unwrap_or(ctx.n()).max(1);
            let found = find_linear_specials(&ctx.sys, max_s)?;
            out.put("max_s", "max s", max_s);
            out.put("specials", "linear specials", found.len());
            for (k, (p, ell, u)) in found.iter().enumerate() {
                let key = format!("special.{}", k + 1);
                if out.machine {
                    out.put(&format!("{}.poly", key), "", ctx.show_poly(p));
                    out.put(&format!("{}.ell", key), "", ell);
                    out.put(&format!("{}.unit", key), "", u);
                } else {
                    out.human(format!("  {}  (ell={}, unit={})", ctx.show_poly(p), ell, u));
                }
            }
            if ctx.sys.has_constant_matrix() {
                match cfinite_specials(&ctx.sys) {
                    Ok(forms) => {
                        out.put("eigenforms", "eigenforms", forms.len());
                        for (k, (p, lambda)) in forms.iter().enumerate() {
                            let key = format!("eigenform.{}", k + 1);
                            if out.machine {
                                out.put(&format!("{}.poly", key), "", ctx.show_poly(p));
                                out.put(&format!("{}.lambda", key), "", lambda);
                            } else {
                                out.human(format!("  {}  (lambda={})", ctx.show_poly(p), lambda));
                            }
                        }
                    }
                    Err(parsum::Error::IrrationalEigenvalues { charpoly }) => {
                        out.put("eigenforms", "eigenforms", 0);
                        out.put("charpoly", "characteristic polynomial", charpoly);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Command::Sum { problem, summand } => {
            let ctx = load(cli, problem)?;
            let (f, den) = ctx.summand(summand.as_deref())?;
            let (res, trace) = parallel_sum_factored(&ctx.sys, &f, &den, &ctx.config)?;
            out.put("summand", "summand", ctx.show_rat(&f));
            out.put("dispersion", "dispersion", show_dispersion(trace.dispersion));
            match &res {
                TelescopeResult::Found { g } => {
                    out.put("normal_bound", "normal bound", ctx.show_factored(&trace.normal_bound.unit, &trace.normal_bound.factors));
                    out.put("special_guess", "special guess", ctx.show_factored(&trace.special_guess.unit, &trace.special_guess.factors));
                    out.put("result", "result", "found");
                    out.put("g", "g", ctx.show_rat(g));
                    out.put("verified", "verified", verify(&ctx.sys, g, &f));
                }
                TelescopeResult::NotSummable { certificate } => {
                    out.put("result", "result", res.to_string());
                    for (k, p) in certificate.normal_factors.iter().enumerate() {
                        out.put(&format!("certificate.{}", k + 1), "  lone orbit", ctx.show_poly(p));
                    }
                }
                TelescopeResult::Inconclusive { t_degree, x_degree } => {
                    out.put("result", "result", "inconclusive");
                    out.put("t_degree", "exhausted t-degree", t_degree);
                    out.put("x_degree", "exhausted x-degree", x_degree);
                    return Ok(EXIT_INCONCLUSIVE);
                }
            }
        }
        Command::Verify { problem, g, summand } => {
            let ctx = load(cli, problem)?;
            let f = match summand {
                Some(t) => parse_expression(t, ctx.names())?,
                None => ctx.summand(None)?.0,
            };
            let g = parse_expression(g, ctx.names())?;
            out.put("verified", "verified", verify(&ctx.sys, &g, &f));
        }
    }
    Ok(EXIT_DECIDED)
}

/// Runs one command line, writing results to `stdout` and diagnostics to
/// `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_DECIDED };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut out = Report { machine: cli.machine, text: String::new() };
    match execute(&cli, &mut out) {
        Ok(code) => {
            let _ = stdout.write_all(out.text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e);
            EXIT_INPUT
        }
    }
}
