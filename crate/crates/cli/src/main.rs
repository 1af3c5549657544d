mod args;
mod plot;

use std::fs;
use std::path::Path as FsPath;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use args::{
    Cli, Command, EnvelopeArgs, Experiment, Generate, Hull3Args, Oracle, PlotArgs, Reduce,
    ReportOpt, Verify,
};
use paramenv_core::construction::{build_phi_graph, count_final_pieces, verify_phi, PhiParams};
use paramenv_core::graph::{
    check_alternation_free_paths, enumerate_paths, envelope_bruteforce, envelope_dp,
    fixed_lambda_shortest,
};
use paramenv_core::grid::{assign_random_weights, gen_grid, grid_piece_experiment};
use paramenv_core::io::{self, SCHEMA_VERSION};
use paramenv_core::link::{
    link_weights, main_lemma_spec, planarize, planarize_spec, required_k, verify_faithful,
};
use paramenv_core::matching::shortest_by_matching;
use paramenv_core::polytope::{cover_check, sample_directions};
use paramenv_core::rational::{format, frac, int, parse};
use paramenv_core::words::{
    find_alternation, gen_gnpl, gen_gpl, gen_x, gen_xhat, is_davenport_schinzel, sequence_to_paths,
};
use paramenv_core::{Envelope, Error, Interval, ParametricGraph, Rational};

enum Failure {
    /// Usage, I/O and malformed-input problems: exit status 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &FsPath, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn rational_arg(s: &str) -> Result<Rational, Failure> {
    Ok(parse(s)?)
}

fn interval_arg(s: &str) -> Result<Interval, Failure> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("expected lo:hi, got `{s}`")))?;
    Ok(Interval::new(rational_arg(lo)?, rational_arg(hi)?)?)
}

fn stamped<T: Serialize>(kind: &str, body: &T) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(body).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("kind".into(), json!(kind));
    }
    Ok(v)
}

/// Writes the report and returns whether the check passed.
fn emit(opt: &ReportOpt, report: Value, passed: bool) -> Outcome {
    let text = io::to_json(&report)?;
    match &opt.report {
        Some(p) => {
            write(p, &text)?;
            println!("{}: {}", if passed { "PASS" } else { "FAIL" }, p.display());
        }
        None => print!("{text}"),
    }
    Ok(passed)
}

fn wrote(path: &FsPath, what: String) {
    println!("wrote {} ({what})", path.display());
}

fn generate(cmd: Generate) -> Outcome {
    match cmd {
        Generate::Phi {
            n,
            inputs,
            d,
            m,
            out,
        } => {
            let inst = build_phi_graph(&PhiParams::new(n, inputs, rational_arg(&d)?, m)?)?;
            write(&out.out, &io::phi_to_json(&inst)?)?;
            wrote(
                &out.out,
                format!(
                    "{} vertices, {} edges",
                    inst.graph.vertex_count(),
                    inst.graph.edges().len()
                ),
            );
        }
        Generate::Link {
            inputs,
            n,
            k,
            l,
            main_lemma,
            out,
        } => {
            let spec = match main_lemma {
                Some(d) => main_lemma_spec(inputs, n, &rational_arg(&d)?)?,
                None => {
                    let k = match k {
                        Some(k) => rational_arg(&k)?,
                        None => required_k(n, &int(0)),
                    };
                    link_weights(
                        inputs,
                        n,
                        vec![vec![int(0); n + 1]; inputs],
                        k,
                        rational_arg(&l)?,
                    )?
                }
            };
            let (arr, g) = planarize_spec(&spec)?;
            write(&out.out, &io::link_to_json(&spec, &g)?)?;
            wrote(
                &out.out,
                format!(
                    "{} points, {} fragments",
                    arr.points.len(),
                    arr.fragments.len()
                ),
            );
        }
        Generate::Words { n, ell, hat, out } => {
            let s = if hat {
                gen_xhat(n, ell)?
            } else {
                gen_x(n, ell)?
            };
            write(&out.out, &io::words_to_json(&s)?)?;
            wrote(
                &out.out,
                format!("{} words of length {}", s.len(), s.length),
            );
        }
        Generate::GridSkeleton {
            p,
            q,
            seed,
            bits,
            out,
        } => {
            let mut g = gen_grid(p, q)?;
            if let Some(seed) = seed {
                g = assign_random_weights(&g, seed, bits)?;
            }
            write(&out.out, &io::graph_to_json(&g)?)?;
            wrote(
                &out.out,
                format!("{} vertices, {} edges", g.vertex_count(), g.edges().len()),
            );
        }
        Generate::Gnpl { n, m, out } => {
            let g = gen_gnpl(n, m)?.graph;
            write(&out.out, &io::graph_to_json(&g)?)?;
            wrote(
                &out.out,
                format!("{} vertices, {} edges", g.vertex_count(), g.edges().len()),
            );
        }
        Generate::Gpl { n, m, out } => {
            let g = gen_gpl(n, m)?.graph;
            write(&out.out, &io::graph_to_json(&g)?)?;
            wrote(
                &out.out,
                format!("{} vertices, {} edges", g.vertex_count(), g.edges().len()),
            );
        }
    }
    Ok(true)
}

/// Brute-force envelope restricted to `domain`, with witnesses re-read from
/// the enumerated paths.
fn bruteforce_on(
    g: &ParametricGraph,
    domain: Option<&Interval>,
    limit: usize,
) -> Result<Envelope, Failure> {
    let full = envelope_bruteforce(g, limit)?;
    let Some(d) = domain else { return Ok(full) };
    let function = full.function.restrict(d.lo.clone(), d.hi.clone())?;
    let paths = enumerate_paths(g, limit)?;
    let witnesses = (0..function.piece_count())
        .map(|i| {
            let x = function.segment_interior_point(i);
            paths
                .iter()
                .min_by_key(|p| g.path_cost(p).eval(&x))
                .cloned()
                .expect("the envelope exists, so some path does")
        })
        .collect();
    Ok(Envelope {
        function,
        witnesses,
    })
}

fn envelope(a: EnvelopeArgs) -> Outcome {
    let g = io::graph_from_json(&read(&a.input)?)?;
    let domain = a.domain.as_deref().map(interval_arg).transpose()?;
    let (env, agree) = match a.oracle {
        Oracle::Dp => (envelope_dp(&g, domain.as_ref())?, true),
        Oracle::Bruteforce => (bruteforce_on(&g, domain.as_ref(), a.limit)?, true),
        Oracle::Both => {
            let dp = envelope_dp(&g, domain.as_ref())?;
            let bf = bruteforce_on(&g, domain.as_ref(), a.limit)?.function;
            let agree = bf == dp.function;
            if !agree {
                eprintln!(
                    "oracles disagree: dp has {} pieces, brute force {}",
                    dp.piece_count(),
                    bf.piece_count()
                );
            }
            (dp, agree)
        }
    };
    let text = io::envelope_to_json(&env)?;
    match &a.out {
        Some(p) => {
            write(p, &text)?;
            wrote(p, format!("{} pieces", env.piece_count()));
        }
        None => print!("{text}"),
    }
    Ok(agree)
}

fn verify(cmd: Verify) -> Outcome {
    match cmd {
        Verify::Phi { input, report } => {
            let inst = io::phi_from_json(&read(&input)?)?;
            let rep = verify_phi(&inst)?;
            let mut v = stamped("verify-phi", &rep)?;
            if inst.params.inputs == 1 {
                v["final_pieces"] = json!(count_final_pieces(&inst)?);
            }
            let passed = rep.passed();
            emit(&report, v, passed)
        }
        Verify::Link {
            input,
            limit,
            report,
        } => {
            let (spec, g) = io::link_from_json(&read(&input)?)?;
            let arr = planarize(spec.inputs, spec.n)?;
            if g.vertex_count() != arr.points.len() || g.edges().len() != arr.fragments.len() {
                return Err(Failure::Usage(
                    "graph does not match the gadget arrangement".into(),
                ));
            }
            let samples = [int(-1), int(0), frac(1, 2), int(1)];
            let rep = verify_faithful(&arr, &g, &spec, &samples, limit)?;
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "verify-link",
                "B": spec.inputs,
                "n": spec.n,
                "unique_straight": rep.unique_straight,
                "exact_cost_and_margin": rep.exact_cost_and_margin,
                "unreachable_outside": rep.unreachable_outside,
                "fact_denominators": rep.fact_denominators,
                "planar": rep.planar,
                "min_gap": rep.min_gap.as_ref().map(format),
                "claim_bound": format(&rep.claim_bound),
                "claim_holds": rep.claim_holds,
                "exhaustive": rep.exhaustive,
                "paths_checked": rep.paths_checked,
                "failures": rep.failures,
                "passed": rep.passed(),
            });
            emit(&report, v, rep.passed())
        }
        Verify::Words {
            input,
            paths,
            report,
        } => {
            let s = io::words_from_json(&read(&input)?)?;
            let alt = find_alternation(&s);
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "verify-words",
                "n": s.n,
                "words": s.len(),
                "length": s.length,
                "alternation": alt,
            });
            let mut passed = alt.is_none();
            if paths {
                let (_, ps) = sequence_to_paths(&s)?;
                let palt = check_alternation_free_paths(&ps);
                v["path_alternation"] = json!(palt.map(|a| [a.i, a.j, a.k, a.u, a.v]));
                passed &= palt.is_none();
            }
            v["passed"] = json!(passed);
            emit(&report, v, passed)
        }
        Verify::Paths { input, report } => {
            let ps = io::paths_from_json(&read(&input)?)?;
            let alt = check_alternation_free_paths(&ps);
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "verify-paths",
                "paths": ps.len(),
                "alternation": alt.map(|a| json!({"i": a.i, "j": a.j, "k": a.k, "u": a.u, "v": a.v})),
                "passed": alt.is_none(),
            });
            emit(&report, v, alt.is_none())
        }
        Verify::Ds {
            input,
            order,
            report,
        } => {
            let seq: Vec<i64> = io::from_json(&read(&input)?)?;
            let ok = is_davenport_schinzel(&seq, order);
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "verify-ds",
                "order": order,
                "length": seq.len(),
                "passed": ok,
            });
            emit(&report, v, ok)
        }
    }
}

fn hull3(a: Hull3Args) -> Outcome {
    let g = io::trigraph_from_json(&read(&a.input)?)?;
    let samples = sample_directions(a.seed, a.samples, 1000);
    let rep = cover_check(&g, &samples, a.limit)?;
    let mut v = stamped("hull3", &rep)?;
    v["seed"] = json!(a.seed);
    v["passed"] = json!(rep.passed());
    emit(&a.report, v, rep.passed())
}

fn experiment(cmd: Experiment) -> Outcome {
    match cmd {
        Experiment::Grid {
            p,
            q,
            trials,
            bits,
            seed,
            report,
        } => {
            let rep = grid_piece_experiment(p, q, trials, bits, seed)?;
            let mut v = stamped("experiment-grid", &rep)?;
            v["passed"] = json!(rep.passed());
            emit(&report, v, rep.passed())
        }
    }
}

fn reduce(cmd: Reduce) -> Outcome {
    match cmd {
        Reduce::Matching {
            input,
            lambda,
            report,
        } => {
            let g = io::graph_from_json(&read(&input)?)?;
            let x = rational_arg(&lambda)?;
            let sol = shortest_by_matching(&g, &x)?;
            let (_, dp_cost) = fixed_lambda_shortest(&g, &x)?;
            let path_cost = g.path_cost(&sol.path).eval(&x);
            let agree = sol.matching.weight == dp_cost && path_cost == dp_cost;
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "reduce-matching",
                "lambda": format(&x),
                "split_vertices": 2 * sol.split.side_len(),
                "split_edges": sol.split.edges.len(),
                "matching_weight": format(&sol.matching.weight),
                "shortest_path_cost": format(&dp_cost),
                "path": io::PathWire::from(&sol.path),
                "passed": agree,
            });
            emit(&report, v, agree)
        }
    }
}

fn plot(a: PlotArgs) -> Outcome {
    let f = io::pwl_from_json(&read(&a.input)?)?;
    let range = a.range.as_deref().map(interval_arg).transpose()?;
    let svg = plot::emit_plot(&f, a.width, a.height, range.as_ref())?;
    write(&a.out, &svg)?;
    wrote(&a.out, format!("{} pieces", f.piece_count()));
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Generate(c) => generate(c),
        Command::Envelope(a) => envelope(a),
        Command::Verify(c) => verify(c),
        Command::Hull3(a) => hull3(a),
        Command::Experiment(c) => experiment(c),
        Command::Reduce(c) => reduce(c),
        Command::Plot(a) => plot(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
