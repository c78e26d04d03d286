use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

use pencil::connection::{hesse_reparam, j_of_z, mirror_map, surface_solution};
use pencil::fukaya::{shifted_trivialization, HolonomyTuple};
use pencil::gw::{eigen_pair, gamma_matrix, lambda_eig, psi_eta, solve_f1_ansatz, solve_fundamental_general, trivial_bulk, z1};
use pencil::lattice::{SeriesClass, SurfaceModel};
use pencil::modular::{gamma_series, jacobi_theta2, jacobi_theta3, theta_e8, theta_hex, theta_hex_deep, theta_shifted};
use pencil::ring::{parse_rational, Coefficient, CyclotomicField};
use pencil::series::{series_to_json, PuiseuxSeries};
use pencil::verify::run_all;
use pencil::Error;

#[derive(Parser)]
#[command(name = "pencil", version, about = "Exact q-series for anticanonical pencils")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// dp1..dp9 or p1xp1; dp8 is F1 and dp9 is CP2.
    #[arg(long, global = true, default_value = "dp9", value_parser = parse_surface)]
    surface: SurfaceModel,
    /// Series are computed modulo O(q^N).
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
    order: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// Cyclotomic field for theta functions with characteristics; a multiple of 12.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    cyclotomic_order: u32,
    /// Exponent denominator used in the output.
    #[arg(long, global = true, default_value_t = 72, value_parser = clap::value_parser!(i64).range(1..))]
    grain: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaKind {
    E8,
    Hex,
    HexDeep,
    Shifted,
    Gamma,
    Jacobi2,
    Jacobi3,
}

#[derive(Subcommand)]
enum Command {
    /// Surface data: components, [δE|], symmetry blocks.
    SeriesInfo,
    /// ψ and η.
    Psi,
    /// z⁽¹⁾ with the trivial bulk term.
    Z1,
    /// The eigenvalue λ(i, j).
    Lambda {
        /// Pair "i,j" of exceptional indices; defaults to a pair of components.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// The connection matrix Γ.
    GammaMatrix,
    /// Named theta series.
    Theta {
        #[arg(long, value_enum, default_value_t = ThetaKind::E8)]
        kind: ThetaKind,
        /// Characteristic u for the Jacobi thetas, e.g. 1/6.
        #[arg(long, default_value = "0", value_parser = parse_rat64)]
        u: Rational64,
    },
    /// Γ and its fundamental solution Θ.
    Connection,
    /// z = −Θ₁₁/Θ₁₂, j(z) and the Hesse parameter.
    MirrorMap,
    /// The bulk term with ψ = 1, η = 0.
    BulkGeneral,
    /// The F1 ansatz B = log β·A₀.
    BulkF1,
    /// Trivialization of the cubic-pencil Floer products.
    FukayaCheck {
        /// One tuple "u1,u2,u3,u4"; all 81 when omitted.
        #[arg(long, value_parser = parse_tuple)]
        holonomy: Option<HolonomyTuple>,
    },
    /// Runs the ten acceptance criteria.
    Verify,
}

fn parse_surface(s: &str) -> Result<SurfaceModel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rat64(s: &str) -> Result<Rational64, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    let (n, d) = (i64::try_from(r.numer()), i64::try_from(r.denom()));
    match (n, d) {
        (Ok(n), Ok(d)) => Ok(Rational64::new(n, d)),
        _ => Err(format!("`{s}` is too large")),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

fn parse_tuple(s: &str) -> Result<HolonomyTuple, String> {
    let parts: Vec<Rational64> = s.split(',').map(parse_rat64).collect::<Result<_, _>>()?;
    let u: [Rational64; 4] = parts.try_into().map_err(|_| "expected four values".to_string())?;
    HolonomyTuple::new(u).map_err(|e| e.to_string())
}

/// Failure modes, mapped to exit codes 1 and 2.
enum Failure {
    Usage(String),
    Compute(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

struct Output {
    text: String,
    json: Value,
}

struct Renderer {
    grain: i64,
}

impl Renderer {
    /// Re-expresses `s` on the output grain; every exponent must lie on it.
    fn regrain<C: Coefficient>(&self, s: &PuiseuxSeries<C>) -> Result<PuiseuxSeries<C>, Failure> {
        let ring = s.ring().clone();
        PuiseuxSeries::from_terms(&ring, self.grain, s.terms().map(|(e, c)| (e, c.clone())), s.precision()).map_err(|e| match e {
            Error::Grain { exponent, .. } => {
                Failure::Usage(format!("--grain {}: exponent {exponent} is not a multiple of 1/{}", self.grain, self.grain))
            }
            other => Failure::Compute(other),
        })
    }

    fn json<C: Coefficient>(&self, s: &PuiseuxSeries<C>) -> Result<Value, Failure> {
        Ok(series_to_json(&self.regrain(s)?))
    }

    /// One term per line, `q^{k/g}: coeff`, then the precision.
    fn text<C: Coefficient + std::fmt::Display>(&self, name: &str, s: &PuiseuxSeries<C>) -> Result<String, Failure> {
        let s = self.regrain(s)?;
        let mut out = format!("{name}:\n");
        for (e, c) in s.terms() {
            out += &format!("  q^{{{e}}}: {c}\n");
        }
        match s.precision() {
            Some(p) => out += &format!("  O(q^{{{p}}})\n"),
            None if s.is_zero() => out += "  0\n",
            None => {}
        }
        Ok(out)
    }

    fn named(&self, items: &[(&str, &PuiseuxSeries<pencil::ring::Rational>)]) -> Result<Output, Failure> {
        let mut text = String::new();
        let mut map = serde_json::Map::new();
        for (name, s) in items {
            text += &self.text(name, s)?;
            map.insert(name.to_string(), self.json(s)?);
        }
        Ok(Output {
            text,
            json: Value::Object(map),
        })
    }

    fn class(&self, name: &str, c: &SeriesClass) -> Result<Output, Failure> {
        let labels = slot_labels();
        let items: Vec<(&str, &PuiseuxSeries<pencil::ring::Rational>)> =
            labels.iter().map(String::as_str).zip(c.0.iter()).collect();
        let inner = self.named(&items)?;
        Ok(Output {
            text: format!("{name}\n{}", inner.text),
            json: json!({ name: inner.json }),
        })
    }
}

fn slot_labels() -> Vec<String> {
    std::iter::once("L".to_string()).chain((0..9).map(|i| format!("A{i}"))).collect()
}

fn field(opts: &Opts) -> Result<std::sync::Arc<CyclotomicField>, Failure> {
    if opts.cyclotomic_order % 12 != 0 {
        return Err(Failure::Usage(format!(
            "--cyclotomic-order {} must be a multiple of 12",
            opts.cyclotomic_order
        )));
    }
    Ok(CyclotomicField::new(opts.cyclotomic_order))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let opts = &cli.opts;
    let s = &opts.surface;
    let n = opts.order;
    let r = Renderer { grain: opts.grain };
    match &cli.command {
        Command::SeriesInfo => {
            let blocks = s.symmetry_blocks();
            let comps: Vec<Value> = s.components().iter().map(|c| c.to_json()).collect();
            let json = json!({
                "surface": s.to_string(),
                "d": s.d(),
                "delta": s.delta().to_json(),
                "m_bar": pencil::lattice::H2Class::m_bar().to_json(),
                "components": comps,
                "symmetry_blocks": blocks,
                "admits_trivial_bulk": s.admits_trivial_bulk(),
                "grain": opts.grain,
                "cyclotomic_order": opts.cyclotomic_order,
            });
            let text = format!(
                "surface: {s}\nd: {}\ndelta: {:?}\nsymmetry blocks: {blocks:?}\nadmits trivial bulk: {}\ngrain: {}\ncyclotomic order: {}\n",
                s.d(),
                s.delta().0,
                s.admits_trivial_bulk(),
                opts.grain,
                opts.cyclotomic_order
            );
            Ok(Output { text, json })
        }
        Command::Psi => {
            let pe = psi_eta(s, n)?;
            r.named(&[("psi", &pe.psi), ("eta", &pe.eta.truncate_int(n))])
        }
        Command::Z1 => r.class("z1", &z1(s, &trivial_bulk(), n)?),
        Command::Lambda { pair } => {
            let (i, j) = pair.unwrap_or_else(|| eigen_pair(s));
            let l = lambda_eig(s, i, j, n)?;
            r.named(&[("lambda", &l)])
        }
        Command::GammaMatrix => {
            let g = gamma_matrix(s, n)?;
            let m = g.matrix();
            r.named(&[
                ("gamma11", m.get(0, 0)),
                ("gamma12", m.get(0, 1)),
                ("gamma21", m.get(1, 0)),
                ("gamma22", m.get(1, 1)),
                ("z2", &g.z2),
            ])
        }
        Command::Theta { kind, u } => {
            let series = match kind {
                ThetaKind::E8 => theta_e8(n),
                ThetaKind::Hex => theta_hex(n),
                ThetaKind::HexDeep => theta_hex_deep(n),
                ThetaKind::Shifted => theta_shifted(s, n),
                ThetaKind::Gamma => gamma_series(n)?,
                ThetaKind::Jacobi2 | ThetaKind::Jacobi3 => {
                    let f = field(opts)?;
                    let t = if matches!(kind, ThetaKind::Jacobi2) {
                        jacobi_theta2(*u, n, &f)?
                    } else {
                        jacobi_theta3(*u, n, &f)?
                    };
                    let text = r.text("theta", &t)?;
                    return Ok(Output {
                        text,
                        json: json!({ "theta": r.json(&t)? }),
                    });
                }
            };
            r.named(&[("theta", &series)])
        }
        Command::Connection => {
            let fs = surface_solution(s, n)?;
            let m = fs.gamma.matrix();
            r.named(&[
                ("gamma11", m.get(0, 0)),
                ("gamma12", m.get(0, 1)),
                ("gamma21", m.get(1, 0)),
                ("gamma22", m.get(1, 1)),
                ("theta11", fs.entry(1, 1)),
                ("theta12", fs.entry(1, 2)),
                ("theta21", fs.entry(2, 1)),
                ("theta22", fs.entry(2, 2)),
            ])
        }
        Command::MirrorMap => {
            let fs = surface_solution(s, n)?;
            let z = mirror_map(&fs)?;
            let mut items = vec![("z", z.clone())];
            if let Ok(j) = j_of_z(&z) {
                items.push(("j", j));
            }
            if let Ok(h) = hesse_reparam(&z) {
                items.push(("hesse", h));
            }
            let refs: Vec<(&str, &PuiseuxSeries<_>)> = items.iter().map(|(k, v)| (*k, v)).collect();
            r.named(&refs)
        }
        Command::BulkGeneral => {
            let b = solve_fundamental_general(s, n)?;
            r.class("bulk", &SeriesClass::from_fn(|i| b.0[i].truncate_int(n)))
        }
        Command::BulkF1 => {
            let sol = solve_f1_ansatz(n)?;
            let mut out = r.named(&[
                ("beta", &sol.beta.truncate_int(n)),
                ("psi", &sol.psi.truncate_int(n)),
                ("eta", &sol.eta.truncate_int(n)),
            ])?;
            out.text += &format!("max consistent order: {}\n", sol.max_consistent_order);
            out.json["max_consistent_order"] = json!(sol.max_consistent_order);
            Ok(out)
        }
        Command::FukayaCheck { holonomy } => {
            let f = field(opts)?;
            let tuples = holonomy.map_or_else(HolonomyTuple::all, |h| vec![h]);
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut failed = 0;
            for h in &tuples {
                let t = shifted_trivialization(h, n, &f)?;
                let u: Vec<String> = h.u.iter().map(ToString::to_string).collect();
                let (ok, shift) = match &t {
                    Some(t) => (true, Some(t.shift.to_string())),
                    None => (false, None),
                };
                failed += usize::from(!ok);
                text += &format!(
                    "({}) {} {}\n",
                    u.join(", "),
                    if ok { "constant" } else { "FAILED" },
                    shift.as_ref().map_or(String::new(), |s| format!("shift {s}"))
                );
                rows.push(json!({ "u": u, "constant": ok, "shift": shift }));
            }
            if failed > 0 {
                return Err(Failure::Verification(format!("{text}{failed} holonomy tuples do not trivialize")));
            }
            Ok(Output {
                text,
                json: json!({ "order": n, "tuples": rows }),
            })
        }
        Command::Verify => {
            let reports = run_all(n);
            let mut text = String::new();
            for rep in &reports {
                text += &format!(
                    "{:>2}  {}  {:<46} {}\n",
                    rep.id,
                    if rep.passed { "pass" } else { "FAIL" },
                    rep.title,
                    rep.detail
                );
            }
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail }))
                .collect();
            if reports.iter().any(|r| !r.passed) {
                return Err(Failure::Verification(text));
            }
            Ok(Output {
                text,
                json: json!({ "order": n, "criteria": rows }),
            })
        }
    }
}

fn emit(opts: &Opts, out: &Output) -> std::io::Result<()> {
    let body = match opts.format {
        Format::Text => out.text.clone(),
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
    };
    match &opts.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => match emit(&cli.opts, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: --out: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            print!("{msg}");
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
