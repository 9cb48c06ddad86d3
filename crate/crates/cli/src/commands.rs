use std::path::Path;

use serde_json::{json, Value};
use tlcga::bisim::{characteristic_formulas, greatest_bisimulation_jobs};
use tlcga::cgm::{scos, validate, RawModel};
use tlcga::checker::{check, check_report, extension};
use tlcga::corpus;
use tlcga::gametheory::*;
use tlcga::onestep::*;
use tlcga::random::*;
use tlcga::strategies::{search_witness, verify_witness, FiniteStrategyProfile, MemoryMode, OracleConfig};
use tlcga::syntax::*;
use tlcga::transform::axioms::{axiom_instance, Scheme};
use tlcga::transform::{induction_formula, nexttime_extension, normal_form, to_mu, unfold};
use tlcga::{Error, Result};

use super::{Command, FormulaArg, Global};
use crate::input::{self, *};
use crate::report::Report;

pub fn run(cmd: Command, g: &Global, echo: &str) -> Result<Report> {
    let mut r = Report::new(echo);
    r.field("seed", g.seed);
    match cmd {
        Command::Check { model, state, formula, extension: ext } => {
            let m = load_model(&model.model)?;
            let s = state_index(&m, state.as_deref())?;
            let f = parse(&formula)?;
            let rep = check_report(&m.model, s, &f)?;
            header(&mut r, &m.model, &f);
            r.field("state", m.model.state_id(s)).field("holds", rep.holds).field("iterations", rep.iterations);
            if ext {
                let e = extension(&m.model, &f)?.ids(&m.model);
                r.field("extension", format!("{{{}}}", e.join(",")));
            }
        }
        Command::Oracle { model, state, formula, mode, limit, max_nodes } => {
            let m = load_model(&model.model)?;
            let s = state_index(&m, state.as_deref())?;
            let f = parse(&formula)?;
            let ga = goal_assignment(&f)?;
            let mode: MemoryMode = mode.parse()?;
            let out = search_witness(&m.model, s, &ga, mode, &OracleConfig { limit, max_nodes })?;
            header(&mut r, &m.model, &f);
            r.field("state", m.model.state_id(s));
            match &out.witness {
                Some(w) => {
                    let verified = verify_witness(&m.model, s, w, &ga)?;
                    r.field("result", if verified { "witness (verified)" } else { "witness (NOT verified)" });
                }
                None if out.exact => {
                    r.field("result", "none (exact)");
                }
                None => {
                    r.field("result", "none (bounded)");
                }
            }
            r.field("steps", out.steps).field("memory_values", out.product_nodes);
            r.field("mode", mode.to_string());
            if let Some(w) = &out.witness {
                let rows: Vec<Value> = w
                    .table
                    .iter()
                    .map(|(mem, acts)| {
                        let st = mem.last();
                        let cells: serde_json::Map<String, Value> = acts
                            .iter()
                            .enumerate()
                            .map(|(a, &x)| (m.model.agents()[a].clone(), Value::from(m.model.actions(st, a)[x].clone())))
                            .collect();
                        json!({"memory": mem.render(&m.model), "actions": cells})
                    })
                    .collect();
                r.json_only("witness", Value::from(rows));
                for l in w.render(&m.model).lines() {
                    r.line(l);
                }
            }
        }
        Command::Validate { model } => {
            let raw = RawModel::from_json(&read_file(&model)?)?;
            let violations = validate(&raw);
            if !violations.is_empty() {
                let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(Error::InvalidModel(text.join("\n  ")));
            }
            let m = tlcga::cgm::Cgm::from_raw(&raw)?;
            r.field("model", model_hash(&m)).field("valid", true);
            r.field("agents", m.num_agents()).field("states", m.num_states()).field("injective", m.is_injective());
        }
        Command::Scos { model, out } => {
            let m = load_model(&model.model)?;
            let sc = scos(&m.model);
            r.field("model", model_hash(&m.model)).field("states", m.model.num_states());
            r.field("scos_states", sc.model.num_states()).field("injective", sc.model.is_injective());
            r.field("scos_model", model_hash(&sc.model));
            let mut copies = serde_json::Map::new();
            for (w, cs) in sc.copies.iter().enumerate() {
                let ids: Vec<String> = cs.iter().map(|&c| sc.model.state_id(c).to_string()).collect();
                r.line(format!("{} -> {}", m.model.state_id(w), ids.join(", ")));
                copies.insert(m.model.state_id(w).into(), Value::from(ids));
            }
            r.json_only("copies", Value::Object(copies));
            if let Some(path) = out {
                write_file(&path, &sc.model.to_raw().to_json())?;
                r.field("written", path.display().to_string());
            }
        }
        Command::Bisim { model, other, pairs, query } => {
            let m1 = load_model(&model.model)?;
            let u = match &other {
                Some(spec) => m1.model.disjoint_union(&load_model(spec)?.model)?.0,
                None => m1.model.clone(),
            };
            let rel = greatest_bisimulation_jobs(&u, g.jobs.max(1));
            r.field("model", model_hash(&u)).field("states", u.num_states()).field("related_pairs", rel.len());
            let classes: Vec<Vec<String>> =
                rel.classes().iter().map(|c| c.iter().map(|&s| u.state_id(s).to_string()).collect()).collect();
            r.field("classes", classes.len());
            for c in &classes {
                r.line(format!("{{{}}}", c.join(",")));
            }
            r.json_only("class_list", json!(classes));
            if pairs {
                let ps: Vec<String> =
                    rel.pairs().filter(|(a, b)| a < b).map(|(a, b)| format!("{} ~ {}", u.state_id(a), u.state_id(b))).collect();
                for p in &ps {
                    r.line(p.clone());
                }
                r.json_only("pairs", json!(ps));
            }
            if let Some(q) = query {
                let s1 = if other.is_some() { u.state(&format!("{}#1", q[0]))? } else { u.state(&q[0])? };
                let s2 = if other.is_some() { u.state(&format!("{}#2", q[1]))? } else { u.state(&q[1])? };
                let same = rel.contains(s1, s2);
                r.field("query", format!("{} {}", q[0], q[1])).field("bisimilar", same);
                if !same {
                    if let Some(f) = characteristic_formulas(&u)?.distinguishing(s1, s2) {
                        r.field("distinguishing", f.to_string());
                    }
                }
            }
        }
        Command::Translate { formula } => {
            let f = parse(&formula)?;
            r.field("formula", f.to_string()).field("result", to_mu(&f)?.to_string());
        }
        Command::Nf { formula } => {
            let f = parse(&formula)?;
            r.field("formula", f.to_string()).field("result", normal_form(&f)?.to_string());
        }
        Command::Unfold { formula, parts } => {
            let f = parse(&formula)?;
            let (u, p) = unfold(&goal_assignment(&f)?);
            r.field("formula", f.to_string()).field("result", u.to_string());
            if parts {
                for (name, fs) in [("finish", &p.finish), ("uholds", &p.uholds), ("gholds", &p.gholds)] {
                    let texts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                    for t in &texts {
                        r.line(format!("{name}: {t}"));
                    }
                    r.json_only(name, json!(texts));
                }
            }
        }
        Command::Ind { formula, phi } => {
            let f = parse(&formula)?;
            let dialect: Dialect = formula.dialect.parse()?;
            let phi = parse_state_formula(&phi, dialect)?;
            r.field("formula", f.to_string()).field("phi", phi.to_string());
            r.field("result", induction_formula(&goal_assignment(&f)?, &phi)?.to_string());
        }
        Command::Oplus { formula } => {
            let f = parse(&formula)?;
            r.field("formula", f.to_string()).field("result", brak(nexttime_extension(&goal_assignment(&f)?)).to_string());
        }
        Command::OnestepSat { sequent, constraint, agents, literal, witness } => {
            onestep(&mut r, &sequent, &constraint, agents.as_deref(), literal, witness)?;
        }
        Command::Stability { model, state, notion, goals, profile, limit } => {
            let m = load_model(&model.model)?;
            let w = state_index(&m, state.as_deref())?;
            let gf = parse_state_formula(&strip_comments(&read_file(&goals)?), Dialect::TlcgaPlus)?;
            let ga = goal_assignment(&gf)?;
            let sigma = profile.map(|p| FiniteStrategyProfile::parse(&m.model, &read_file(&p)?)).transpose()?;
            stability(&mut r, &m.model, w, &ga, &notion, sigma.as_ref(), limit)?;
        }
        Command::Axioms { samples, scheme, max_states, depth } => {
            let schemes: Vec<Scheme> = if scheme.is_empty() {
                Scheme::ALL.to_vec()
            } else {
                scheme.iter().map(|s| s.parse()).collect::<Result<_>>()?
            };
            r.field("samples", samples);
            let results = axiom_sweep(&schemes, samples, max_states, depth, g.seed, g.jobs.max(1))?;
            let mut total = 0;
            for (s, (bad, example)) in schemes.iter().zip(&results) {
                total += bad;
                r.line(format!("{s}: {bad} counterexamples in {samples} samples"));
                if let Some(e) = example {
                    r.line(format!("  first: {e}"));
                }
            }
            r.field("counterexamples", total);
        }
        Command::Corpus { list, name, params, out } => corpus_cmd(&mut r, list, name, &params, out.as_deref())?,
    }
    Ok(r)
}

fn parse(arg: &FormulaArg) -> Result<Formula> {
    let dialect: Dialect = arg.dialect.parse()?;
    parse_state_formula(&formula_text(arg.formula.as_deref(), arg.formula_file.as_deref())?, dialect)
}

fn header(r: &mut Report, m: &tlcga::cgm::Cgm, f: &Formula) {
    r.field("model", model_hash(m)).field("formula", f.to_string());
}

fn onestep(
    r: &mut Report,
    sequent: &Path,
    constraint: &Path,
    agents: Option<&str>,
    literal: bool,
    witness: bool,
) -> Result<()> {
    let lines: Vec<Formula> = read_file(sequent)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_state_formula(l, Dialect::Tlcga))
        .collect::<Result<_>>()?;
    let agents: Vec<String> = match agents {
        Some(a) => input::names(a).into_iter().collect(),
        None => {
            let mut found = std::collections::BTreeSet::new();
            for f in &lines {
                f.visit(&mut |x| {
                    if let StateFormula::Brak(g) = x {
                        for c in g.support() {
                            found.extend(c.members().map(String::from));
                        }
                    }
                });
            }
            found.into_iter().collect()
        }
    };
    let (vars, family) = parse_constraint(&read_file(constraint)?)?;
    let conj_f = conj(lines.iter().cloned());
    let mut extra = std::collections::BTreeSet::new();
    for f in &lines {
        extra.extend(f.props());
    }
    let s = match vars {
        Some(v) => SatConstraint::new(v, family)?,
        None => SatConstraint::infer(&family, &extra),
    };
    let mode = if literal { Conditions::Literal } else { Conditions::Repaired };
    r.field("agents", agents.join(",")).field("conditions", format!("{mode:?}").to_lowercase());
    let all_literals = lines.iter().all(|f| OneStepSequent::from_literals(agents.clone(), std::slice::from_ref(f)).is_ok());
    let seq = if all_literals {
        OneStepSequent::from_literals(agents.clone(), &lines)?
    } else {
        // Positive one-step formula: satisfiable iff some DNF branch is.
        let mut chosen = None;
        for branch in dnf(&conj_f)? {
            let seq = OneStepSequent::from_literals(agents.clone(), &branch)?;
            let sat = seq.satisfiable_with(&s, mode)?.is_sat();
            if sat || chosen.is_none() {
                chosen = Some(seq);
            }
            if sat {
                break;
            }
        }
        match chosen {
            Some(seq) => seq,
            None => {
                r.field("result", "UNSAT").field("certificate", "the formula has no disjunctive branch");
                return Ok(());
            }
        }
    };
    match seq.satisfiable_with(&s, mode)? {
        SatResult::Sat => {
            r.field("result", "SAT");
            if witness {
                let form = witness_game_form(&seq, &s)?;
                for l in form.render(256).lines() {
                    r.line(l);
                }
            }
        }
        SatResult::Unsat(c) => {
            r.field("result", "UNSAT").field("certificate", CertificateDisplay(&seq, &c).to_string());
        }
    }
    Ok(())
}

fn names_of(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(","))
}

fn stability(
    r: &mut Report,
    m: &tlcga::cgm::Cgm,
    w: usize,
    ga: &GoalAssignment,
    notion: &str,
    sigma: Option<&FiniteStrategyProfile>,
    limit: usize,
) -> Result<()> {
    let need = || sigma.ok_or_else(|| Error::Precondition(format!("--notion {notion} needs --profile")));
    r.field("model", model_hash(m)).field("state", m.state_id(w)).field("goals", brak(ga.clone()).to_string());
    r.field("notion", notion);
    let target = match notion {
        "nash" | "strong" | "coalitional" | "core" => {
            let part = partition_outcomes(m, w, need()?, ga)?;
            r.field("winners", names_of(&part.winners)).field("losers", names_of(&part.losers));
            match notion {
                "nash" => {
                    let dev = brute_force_nash(m, w, need()?, ga, limit)?;
                    r.field("profile_is_nash", dev.is_none());
                    if let Some(d) = dev {
                        r.field("deviating_agent", d.agent);
                    }
                    brak(nash_ga(m.agents(), ga, &part)?)
                }
                "strong" => brak(strong_ga(m.agents(), ga, &part)?),
                "coalitional" => brak(coalitional_ga(m.agents(), ga, &part)?),
                _ => core_nonempty_formula(ga, &part.losers)?,
            }
        }
        "coeq" => {
            let star = coequilibrium_ga(m.agents(), ga);
            if let Some(s) = sigma {
                r.field("profile_witnesses", verify_witness(m, w, s, &star)?);
            }
            brak(star)
        }
        other => return Err(Error::Precondition(format!("unknown notion `{other}`"))),
    };
    r.field("formula", target.to_string()).field("holds", check(m, w, &target)?);
    Ok(())
}

type SchemeResult = (usize, Option<String>);

fn axiom_sweep(schemes: &[Scheme], samples: usize, max_states: usize, depth: usize, seed: u64, jobs: usize) -> Result<Vec<SchemeResult>> {
    let one = |i: usize, scheme: Scheme| -> Result<SchemeResult> {
        let mut rg = rng(seed.wrapping_add(i as u64));
        let mcfg = ModelConfig { max_states: max_states.max(1), agents: names_vec(&["a", "b", "c"]), ..Default::default() };
        let mut bad = 0;
        let mut first = None;
        for _ in 0..samples {
            let m = random_model_any_agents(&mut rg, &mcfg);
            let cfg = FormulaConfig { max_coalitions: 2, ..FormulaConfig::for_model(&m, depth) };
            let f = axiom_instance(scheme, &random_substitution(&mut rg, scheme, &cfg))?;
            let ext = extension(&m, &f)?;
            if !ext.is_full() {
                bad += 1;
                if first.is_none() {
                    let s = (0..m.num_states()).find(|&s| !ext.contains(s)).expect("not full");
                    first = Some(format!("{f} fails at {} of a {}-state model", m.state_id(s), m.num_states()));
                }
            }
        }
        Ok((bad, first))
    };
    let indexed: Vec<(usize, Scheme)> = schemes.iter().map(|&s| (Scheme::ALL.iter().position(|x| *x == s).unwrap_or(0), s)).collect();
    if jobs <= 1 {
        return indexed.iter().map(|&(i, s)| one(i, s)).collect();
    }
    let chunk = indexed.len().div_ceil(jobs).max(1);
    std::thread::scope(|sc| {
        let handles: Vec<_> = indexed
            .chunks(chunk)
            .map(|part| sc.spawn(move || part.iter().map(|&(i, s)| one(i, s)).collect::<Result<Vec<_>>>()))
            .collect();
        let mut out = Vec::new();
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

fn names_vec(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn corpus_cmd(r: &mut Report, list: bool, name: Option<String>, params: &[String], out: Option<&Path>) -> Result<()> {
    if list || name.is_none() {
        for n in corpus::NAMES {
            let e = corpus::build(n, &[])?;
            let shown = if n == "sheep-wolves" { "sheep-wolves(n,m,mode)".to_string() } else { n.to_string() };
            r.line(format!("{shown}: {}", e.description));
        }
        r.json_only("entries", json!(corpus::NAMES));
        return Ok(());
    }
    let name = name.expect("checked above");
    let e = corpus::build(&name, params)?;
    r.field("name", e.name.clone()).field("model", model_hash(&e.model));
    r.field("states", e.model.num_states()).field("start", e.start.clone());
    let provenance = format!("# corpus entry: {}\n# {}\n", std::iter::once(name.as_str()).chain(params.iter().map(String::as_str)).collect::<Vec<_>>().join(" "), e.description);
    for f in &e.formulas {
        r.line(format!("{}: {}", f.label, f.text));
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|err| Error::Io(format!("{}: {err}", dir.display())))?;
        let model_path = dir.join(format!("{name}.json"));
        write_file(&model_path, &e.model.to_raw().to_json())?;
        r.line(format!("wrote {}", model_path.display()));
        for f in &e.formulas {
            let p = dir.join(format!("{name}.{}.formula", f.label));
            write_file(&p, &format!("{provenance}# start state: {}\n{}\n", e.start, f.text))?;
            r.line(format!("wrote {}", p.display()));
        }
    }
    Ok(())
}
