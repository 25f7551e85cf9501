use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use super::args::*;
use super::parse;
use super::report::{to_value, Certificate, Report, Verdict};
use super::scenarios::{line_over_cyclic, random_subgroup_words};
use crate::caps::ResourceCaps;
use crate::coarse::{
    coarse_sc_probe, covering_injectivity_check, filtration_probe, qi_transfer_constants, CoveringMap, LiftOutcome,
    LoopFamily, QiCertificate, QiConstants, ScProbeConfig, ScVerdict,
};
use crate::error::{Error, Result};
use crate::homotopy::{
    decompose_filling, verify_decomposition, ContractionOutcome, Contractor, NegativeCertificate, SearchBudget,
};
use crate::presentations::{defining_subset_probe, FailCertificate, ProbeVerdict};
use crate::rational::{format_rational, Rational};
use crate::rips::build_rips2;
use crate::spaces::{circle_space, word_ball, Elem, FiniteMetricSpace, Homomorphism};
use crate::subgroups::{ms_generators, ms_rewrite, verify_rewrite, CosetData};

pub(crate) fn budget(caps: &ResourceCaps, nodes: Option<usize>) -> SearchBudget {
    let mut b = SearchBudget::from_caps(caps);
    if let Some(n) = nodes {
        b.max_nodes = n;
    }
    b
}

/// Adds the certificate of a contraction outcome to the report.
pub(crate) fn certify(report: &mut Report, space: usize, outcome: &ContractionOutcome) {
    match outcome {
        ContractionOutcome::Contracted(moves) => {
            report.certificates.push(Certificate::Contraction { space, moves: moves.clone() })
        }
        ContractionOutcome::Impossible(NegativeCertificate::Winding(w)) => {
            report.certificates.push(Certificate::Winding { space, certificate: w.clone() })
        }
        _ => {}
    }
}

pub(crate) fn outcome_verdict(outcome: &ContractionOutcome) -> Verdict {
    match outcome {
        ContractionOutcome::Contracted(_) => Verdict::Pass,
        ContractionOutcome::Impossible(_) => Verdict::Fail,
        ContractionOutcome::Inconclusive(_) => Verdict::Inconclusive,
    }
}

pub fn rips(args: &RipsArgs, caps: &ResourceCaps) -> Result<Report> {
    let built = parse::space(&args.source, caps)?;
    let t = parse::scale(&args.scale)?;
    let complex = build_rips2(&built.space, t)?;
    let components = complex.connected_components();
    let mut report = Report::new("rips", json!({ "space": built.description, "scale": format_rational(&t) }));
    let mut summary = json!({
        "vertices": complex.vertex_count(),
        "edges": complex.edges().len(),
        "triangles": complex.triangles().len(),
        "components": components.len(),
        "connected": components.len() <= 1,
        "window_internal": built.window.as_ref().is_some_and(|w| w.window_internal()),
    });
    if args.full {
        summary["complex"] = to_value(&complex.to_json());
    }
    report.summary = summary;
    report.verdict = Verdict::from_bool(components.len() <= 1);
    report.dot = Some(complex.to_dot());
    report.csv = Some(built.space.to_csv());
    Ok(report)
}

pub fn contract(args: &ContractArgs, caps: &ResourceCaps) -> Result<Report> {
    let built = parse::space(&args.source, caps)?;
    let space = &built.space;
    let lp = match &args.loop_labels {
        Some(text) => parse::loop_points(space, text)?,
        None if args.source.circle.is_some() => {
            let mut l: Vec<usize> = (0..space.len()).collect();
            l.push(0);
            l
        }
        None => return Err(Error::invalid("--loop is required unless the space is a circle")),
    };
    let scale = parse::scale(&args.scale)?;
    let outcome = Contractor::new(space, scale, budget(caps, args.budget_nodes))?.contract(&lp)?;
    let mut report = Report::new(
        "contract",
        json!({ "space": built.description, "scale": format_rational(&scale), "loop": space_labels(space, &lp) }),
    );
    let idx = report.add_space(space);
    certify(&mut report, idx, &outcome);
    let mut summary = json!({ "outcome": outcome.label(), "loop_length": lp.len() - 1 });
    if let (true, Some(moves)) = (args.filling, outcome.moves()) {
        let complex = build_rips2(space, scale)?;
        if complex.is_edge_path(&lp) {
            let d = decompose_filling(&complex, &lp, moves)?;
            summary["filling_factors"] = json!(d.len());
            summary["filling_verified"] = json!(verify_decomposition(&complex, &lp, &d));
            report.certificates.push(Certificate::Filling { space: idx, loop_points: lp.clone(), decomposition: d });
        } else {
            summary["filling_verified"] = json!(false);
            summary["filling_note"] = json!("the loop repeats a point, so it is not an edge loop of the Rips complex");
        }
    }
    report.items.push(json!({ "loop": space_labels(space, &lp), "result": to_value(&outcome) }));
    report.summary = summary;
    report.verdict = outcome_verdict(&outcome);
    report.dot = Some(loop_dot(space, &lp));
    Ok(report)
}

fn space_labels(space: &FiniteMetricSpace, points: &[usize]) -> Vec<String> {
    points.iter().map(|&p| space.label(p).to_string()).collect()
}

fn loop_dot(space: &FiniteMetricSpace, lp: &[usize]) -> String {
    let mut out = String::from("digraph loop {\n");
    for (i, w) in lp.windows(2).enumerate() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{i}\"];", space.label(w[0]), space.label(w[1]));
    }
    out.push_str("}\n");
    out
}

pub fn sc_probe(args: &ScProbeArgs, caps: &ResourceCaps) -> Result<Report> {
    let built = parse::space(&args.source, caps)?;
    if args.cap_loops > caps.max_loop_length {
        return Err(Error::ResourceCap { cap: "max_loop_length", limit: caps.max_loop_length });
    }
    let mut config = ScProbeConfig::new(parse::scale(&args.r)?, parse::scale(&args.scale)?, args.cap_loops);
    config.family = if args.all { LoopFamily::All } else { LoopFamily::Irreducible };
    config.budget = budget(caps, args.budget_nodes);
    config.check_fillings = args.fillings;
    config.keep_contracted = args.keep > 0;
    let mut probe = coarse_sc_probe(&built.space, &config)?;
    Ok(sc_report("sc-probe", json!({ "space": built.description }), &built.space, &mut probe, args.keep))
}

pub(crate) fn sc_report(
    command: &str,
    mut parameters: Value,
    space: &FiniteMetricSpace,
    probe: &mut crate::coarse::ScProbeReport,
    keep: usize,
) -> Report {
    let loops = std::mem::take(&mut probe.loops);
    parameters["probe"] = to_value(&probe.config);
    let mut report = Report::new(command, parameters);
    let idx = report.add_space(space);
    let mut kept = 0;
    let mut csv = String::from("loop,outcome\n");
    for l in loops {
        if l.outcome.is_contracted() {
            if kept >= keep {
                continue;
            }
            kept += 1;
        }
        certify(&mut report, idx, &l.outcome);
        let _ = writeln!(csv, "\"{}\",{}", l.loop_labels.join(" "), l.outcome.label());
        report.items.push(to_value(&l));
    }
    report.verdict = match probe.verdict {
        ScVerdict::Pass => Verdict::Pass,
        ScVerdict::Fail => Verdict::Fail,
        ScVerdict::Inconclusive => Verdict::Inconclusive,
    };
    report.summary = to_value(&*probe);
    report.csv = Some(csv);
    report
}

pub fn check_defining(args: &CheckDefiningArgs, caps: &ResourceCaps) -> Result<Report> {
    let fam = parse::family(&args.family)?;
    let gens = parse::generators(&fam, Some(&args.gens))?;
    let probe = defining_subset_probe(&fam, &gens, args.cap_loops, caps)?;
    let mut report = Report::new(
        "check-defining",
        json!({ "family": to_value(&fam), "generators": probe.generators, "cap_loops": args.cap_loops }),
    );
    report.verdict = match &probe.verdict {
        ProbeVerdict::Pass => Verdict::Pass,
        ProbeVerdict::Fail { certificate, .. } => {
            if let FailCertificate::Cocycle(c) = certificate {
                report.certificates.push(Certificate::Cocycle {
                    family: fam.clone(),
                    generators: gens.clone(),
                    certificate: c.clone(),
                });
            }
            Verdict::Fail
        }
        ProbeVerdict::Inconclusive { .. } => Verdict::Inconclusive,
    };
    report.summary = to_value(&probe);
    Ok(report)
}

/// First element of each coset in breadth-first order, identity first.
fn default_transversal(phi: &Homomorphism, gens: &crate::spaces::GeneratingSet, caps: &ResourceCaps) -> Result<Vec<Elem>> {
    let order = phi.target.order().ok_or_else(|| Error::invalid("the target group must be finite"))?;
    let (ball, _) = word_ball(&phi.source, gens, order, caps.max_ball_size)?;
    let mut seen: HashMap<Elem, ()> = HashMap::new();
    let mut out = Vec::new();
    for g in ball {
        if seen.insert(phi.apply(&g), ()).is_none() {
            out.push(g);
        }
    }
    Ok(out)
}

pub fn ms(args: &MsArgs, caps: &ResourceCaps) -> Result<Report> {
    let fam = parse::family(&args.family)?;
    let gens = parse::generators(&fam, args.gens.as_deref())?;
    let target = parse::family(&args.target)?;
    let phi = Homomorphism::new(fam.clone(), target.clone(), parse::elements(&target, &args.images)?)?;
    let transversal = match &args.transversal {
        Some(t) => parse::elements(&fam, t)?,
        None => default_transversal(&phi, &gens, caps)?,
    };
    let data = CosetData::new(phi, transversal, gens.clone())?;
    let t = ms_generators(&data);
    let words = random_subgroup_words(&data, args.words, args.max_len, args.seed)?;
    let s_labels: Vec<String> = gens.elements().iter().map(|g| fam.format_element(g)).collect();
    let mut report = Report::new(
        "ms-generators",
        json!({
            "family": to_value(&fam),
            "generators": s_labels,
            "target": to_value(&target),
            "images": args.images,
            "words": args.words,
            "max_len": args.max_len,
            "seed": args.seed,
        }),
    );
    let mut all_ok = true;
    for w in &words {
        let r = ms_rewrite(&data, &t, w)?;
        let ok = verify_rewrite(&data, &t, w, &r);
        all_ok &= ok;
        report.items.push(json!({
            "word": w.iter().map(|&i| s_labels[i].clone()).collect::<Vec<_>>(),
            "s_length": w.len(),
            "t_length": r.len(),
            "rewrite": r.labels,
            "correct": ok,
        }));
    }
    let classes: Vec<String> = t.up_to_inversion(&fam).iter().map(|g| fam.format_element(g)).collect();
    let t_ok = t.verify(&data);
    report.summary = json!({
        "index": data.index(),
        "transversal": data.transversal.iter().map(|k| fam.format_element(k)).collect::<Vec<_>>(),
        "generators": t.generators.iter().map(|g| g.label.clone()).collect::<Vec<_>>(),
        "generators_up_to_inversion": classes,
        "generators_verified": t_ok,
        "words_checked": words.len(),
        "rewrites_correct": all_ok,
    });
    report.certificates.push(Certificate::Schreier { data, generators: t });
    report.verdict = Verdict::from_bool(t_ok && all_ok);
    Ok(report)
}

pub fn circle_bound(args: &CircleBoundArgs, caps: &ResourceCaps) -> Result<Report> {
    let circumference = parse::scale(&args.circumference)?;
    let n = match args.points {
        Some(n) => n,
        None if circumference.is_integer() => circumference.to_integer() as usize,
        None => return Err(Error::invalid("--points is required for a non-integer circumference")),
    };
    let r = parse::scale(&args.scale)?;
    let circle = circle_space(circumference, n)?;
    let lp = circle.full_loop(args.turns);
    let outcome = Contractor::new(circle.space(), r, budget(caps, args.budget_nodes))?.contract(&lp)?;
    let three_r = Rational::from_integer(3) * r;
    let predicted = args.turns == 0 || circumference <= three_r;
    let consistent = match &outcome {
        ContractionOutcome::Contracted(_) => predicted,
        ContractionOutcome::Impossible(_) => !predicted,
        ContractionOutcome::Inconclusive(_) => false,
    };
    let mut report = Report::new(
        "circle-bound",
        json!({
            "circumference": format_rational(&circumference),
            "points": n,
            "scale": format_rational(&r),
            "turns": args.turns,
        }),
    );
    let idx = report.add_space(circle.space());
    certify(&mut report, idx, &outcome);
    report.summary = json!({
        "three_r": format_rational(&three_r),
        "predicted_contractible": predicted,
        "outcome": outcome.label(),
        "consistent": consistent,
    });
    report.items.push(to_value(&outcome));
    report.verdict = if outcome.is_inconclusive() { Verdict::Inconclusive } else { Verdict::from_bool(consistent) };
    Ok(report)
}

pub fn covering(args: &CoveringArgs, caps: &ResourceCaps) -> Result<Report> {
    let (up, down, map) = line_over_cyclic(args.radius, args.modulus, caps)?;
    let cov = CoveringMap::new(up.space(), down.space(), map)?;
    let scale = parse::scale(&args.scale)?;
    let mut report = Report::new(
        "covering",
        json!({
            "upstairs": format!("line window of radius {}", args.radius),
            "downstairs": format!("cyclic:{}", args.modulus),
            "scale": format_rational(&scale),
            "r": args.r,
            "R": args.big_r,
            "lift": args.lift,
        }),
    );
    let check = cov.is_r_covering(&scale);
    let mut summary = json!({ "covering": to_value(&check) });
    let mut verdict = Verdict::from_bool(check.is_covering);
    if let Some(r) = &args.r {
        let r = parse::scale(r)?;
        let big_r = parse::scale(args.big_r.as_deref().unwrap_or("2"))?;
        let inj = covering_injectivity_check(&cov, r, big_r, budget(caps, args.budget_nodes))?;
        verdict = Verdict::from_bool(!inj.contradiction);
        summary["injectivity"] = to_value(&inj);
    }
    if let Some(text) = &args.lift {
        let lp = parse::loop_points(down.space(), text)?;
        let outcome = Contractor::new(down.space(), scale, budget(caps, args.budget_nodes))?.contract(&lp)?;
        let Some(moves) = outcome.moves() else {
            summary["lift"] = json!({ "contraction": to_value(&outcome) });
            report.summary = summary;
            report.verdict = outcome_verdict(&outcome);
            return Ok(report);
        };
        let start = up
            .index_of(&Elem::scalar(lp[0] as i64))
            .ok_or_else(|| Error::invalid("the loop must start at a residue inside the upstairs window"))?;
        let lifted = cov.lift_homotopy(moves, start)?;
        verdict = Verdict::from_bool(matches!(lifted, LiftOutcome::Lifted { .. }));
        summary["lift"] = json!({ "moves": moves.len(), "result": to_value(&lifted) });
    }
    report.summary = summary;
    report.verdict = verdict;
    Ok(report)
}

pub fn qi(args: &QiArgs, _caps: &ResourceCaps) -> Result<Report> {
    let mut report = Report::new("qi-transfer", Value::Null);
    let (constants, validation) = match &args.cert {
        Some(path) => {
            let value: Value = parse::read_json(path)?;
            let cert = QiCertificate::from_json(&value)?;
            let v = cert.validate();
            report.certificates.push(Certificate::Qi { certificate: value, expect_valid: v.valid });
            (cert.constants, Some(v))
        }
        None => (
            QiConstants {
                a: parse::scale(&args.a)?,
                b: parse::scale(&args.b)?,
                alpha: parse::scale(&args.alpha)?,
                beta: parse::scale(&args.beta)?,
                c: parse::scale(&args.c)?,
                gamma: parse::scale(&args.gamma)?,
            },
            None,
        ),
    };
    let r = parse::scale(&args.r)?;
    let big_r = args.big_r.as_deref().map(parse::scale).transpose()?;
    let rho = args.rho.as_deref().map(parse::scale).transpose()?;
    let zero = Rational::from_integer(0);
    let t = qi_transfer_constants(&constants, r, big_r.unwrap_or(zero), rho.unwrap_or(zero))?;
    report.parameters = json!({
        "constants": to_value(&constants),
        "r": format_rational(&r),
        "R": big_r.map(|x| format_rational(&x)),
        "rho": rho.map(|x| format_rational(&x)),
    });
    let mut summary = json!({ "r_prime": format_rational(&t.r_prime) });
    if let Some(rho) = rho {
        summary["pushed_scale"] = json!(format_rational(&(constants.a * rho + constants.b)));
    }
    if big_r.is_some() && rho.is_some() {
        summary["rho_prime"] = json!(format_rational(&t.rho_prime));
    }
    if let Some(v) = &validation {
        summary["validation"] = to_value(v);
    }
    report.summary = summary;
    report.verdict = Verdict::from_bool(validation.is_none_or(|v| v.valid));
    Ok(report)
}

pub fn filtration(args: &FiltrationArgs, caps: &ResourceCaps) -> Result<Report> {
    let fam = parse::family(&args.family)?;
    let gens = parse::generators(&fam, args.gens.as_deref())?;
    let target = parse::family(&args.target)?;
    let phi = Homomorphism::new(fam.clone(), target.clone(), parse::elements(&target, &args.images)?)?;
    let window = crate::spaces::build_window(&fam, &gens, args.radius, caps)?;
    let max_n = args.max_n.unwrap_or(args.radius);
    let probe = filtration_probe(&window, &phi, max_n)?;
    let mut report = Report::new(
        "filtration",
        json!({
            "family": to_value(&fam),
            "generators": gens.elements().iter().map(|g| fam.format_element(g)).collect::<Vec<_>>(),
            "target": to_value(&target),
            "images": args.images,
            "radius": args.radius,
            "max_n": max_n,
        }),
    );
    let mut csv = String::from("n,seeds,closure_size,exhausts\n");
    for l in &probe.levels {
        let _ = writeln!(csv, "{},{},{},{}", l.n, l.seeds, l.closure_size, l.exhausts);
    }
    report.csv = Some(csv);
    report.verdict = Verdict::from_bool(probe.least_n.is_some() && probe.monotone);
    report.summary = to_value(&probe);
    Ok(report)
}

pub fn verify(args: &VerifyArgs) -> Result<Report> {
    let original: Report = parse::read_json(&args.report)?;
    let results = original.verify_certificates()?;
    let mut report = Report::new("verify", json!({ "report": args.report.display().to_string() }));
    let mut valid = 0;
    for (i, (cert, res)) in original.certificates.iter().zip(&results).enumerate() {
        valid += res.is_ok() as usize;
        report.items.push(json!({
            "index": i,
            "kind": cert.kind(),
            "valid": res.is_ok(),
            "error": res.as_ref().err().map(|e| e.to_string()),
        }));
    }
    report.summary = json!({
        "command": original.command,
        "certificates": results.len(),
        "valid": valid,
    });
    report.verdict = Verdict::from_bool(valid == results.len());
    Ok(report)
}
