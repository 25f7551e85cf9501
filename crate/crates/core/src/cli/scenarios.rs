//! Named scenarios and the instances they are built from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::args::{MsArgs, ScenarioArgs, ScenarioName};
use super::commands::{budget, certify, ms, outcome_verdict, sc_report};
use super::parse;
use super::report::{to_value, Certificate, Report, Verdict};
use crate::caps::ResourceCaps;
use crate::coarse::{
    based_loops, coarse_sc_probe, covering_injectivity_check, filtration_probe, CoveringMap, LiftOutcome,
    LoopFamily, QiCertificate, QiConstants, ScProbeConfig,
};
use crate::error::{Error, Result};
use crate::homotopy::{ContractionOutcome, Contractor, NegativeCertificate};
use crate::presentations::{
    extension_relators, factorial_certificate, relators_hold_in_window, verify_finite_presentation, ExtensionData,
    Letter, Presentation,
};
use crate::rational::{format_rational, int, Rational};
use crate::spaces::{build_window, circle_space, group_subspace, Elem, GeneratingSet, GroupFamily, GroupWindow, Homomorphism};
use crate::subgroups::CosetData;

/// The line window of the given radius, the whole of `Cyclic(modulus)`,
/// and reduction mod `modulus` between them.
pub fn line_over_cyclic(radius: usize, modulus: u32, caps: &ResourceCaps) -> Result<(GroupWindow, GroupWindow, Vec<usize>)> {
    if modulus < 2 {
        return Err(Error::invalid("the modulus must be at least 2"));
    }
    let up = build_window(&GroupFamily::line(), &GeneratingSet::line(&[1])?, radius, caps)?;
    let cyc = GroupFamily::Cyclic { modulus };
    let down = build_window(&cyc, &GeneratingSet::standard(&cyc), modulus as usize, caps)?;
    let map = up
        .elements()
        .iter()
        .map(|e| down.index_of(&Elem::scalar(e.0[0].rem_euclid(modulus as i64))).expect("residues are in the window"))
        .collect();
    Ok((up, down, map))
}

/// Inclusion of the even points of the box `[-b, b]²` into the box, with
/// coordinatewise rounding to the nearest even number (ties down) back.
/// Both sides carry the word metric of Z² with its standard generators;
/// `b` must be even so that rounding stays in the box.
pub fn even_sublattice_certificate(b: i64, gamma: Rational, caps: &ResourceCaps) -> Result<QiCertificate> {
    if b < 2 || b % 2 != 0 {
        return Err(Error::invalid("the box radius must be even and positive"));
    }
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    let gens = GeneratingSet::standard(&z2);
    let boxed: Vec<Elem> = (-b..=b).flat_map(|x| (-b..=b).map(move |y| Elem::new([x, y]))).collect();
    let even: Vec<Elem> = boxed.iter().filter(|e| e.0.iter().all(|c| c % 2 == 0)).cloned().collect();
    let origin = z2.identity();
    let y = group_subspace(&z2, &gens, &boxed, &origin, caps)?;
    let x = group_subspace(&z2, &gens, &even, &origin, caps)?;
    let round = |c: i64| if c % 2 == 0 { c } else { c - 1 };
    let lookup = |space: &crate::spaces::FiniteMetricSpace, e: &Elem| {
        space.index_of(&z2.format_element(e)).ok_or_else(|| Error::invalid("rounding leaves the box"))
    };
    let f = (0..x.len())
        .map(|i| lookup(&y, &z2.parse_element(x.label(i))?))
        .collect::<Result<Vec<_>>>()?;
    let g = (0..y.len())
        .map(|i| {
            let e = z2.parse_element(y.label(i))?;
            lookup(&x, &Elem::new([round(e.0[0]), round(e.0[1])]))
        })
        .collect::<Result<Vec<_>>>()?;
    let constants = QiConstants { a: int(1), b: int(0), alpha: int(1), beta: int(2), c: int(1), gamma };
    QiCertificate::new(x, y, f, g, constants)
}

/// Z² → Z/2, both basis vectors to 1, with transversal `{e, a}`.
pub fn free_parity_cosets() -> Result<CosetData> {
    let f2 = GroupFamily::Free { rank: 2 };
    let c2 = GroupFamily::Cyclic { modulus: 2 };
    let phi = Homomorphism::new(f2.clone(), c2, vec![Elem::scalar(1), Elem::scalar(1)])?;
    let a = f2.parse_element("a")?;
    CosetData::new(phi, vec![f2.identity(), a], GeneratingSet::standard(&f2))
}

/// Seeded words of length 1..=max_len in the generators of `data` whose
/// value lies in the subgroup.
pub fn random_subgroup_words(data: &CosetData, count: usize, max_len: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if max_len == 0 && count > 0 {
        return Err(Error::invalid("random words need a positive length"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = data.generators.len();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > count.saturating_mul(1000) {
            return Err(Error::invalid("could not sample enough subgroup words"));
        }
        let len = rng.gen_range(1..=max_len);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..s)).collect();
        if data.contains(&data.generators.evaluate(data.family(), &word)) {
            out.push(word);
        }
    }
    Ok(out)
}

/// HeisenbergZ as an extension of Z² = ⟨x, y | [x, y]⟩ by Z = ⟨z⟩ with
/// `z = [x, y] = (0, 0, 2)`.
pub fn heisenberg_extension_data() -> Result<ExtensionData> {
    let z = Elem::new([0, 0, 2]);
    Ok(ExtensionData {
        family: GroupFamily::HeisenbergZ,
        quotient: Presentation::from_text("generators: x y\nx y x^-1 y^-1\n")?,
        kernel: Presentation::from_text("generators: z\n")?,
        kernel_images: vec![z.clone()],
        lifts: vec![Elem::new([1, 0, 0]), Elem::new([0, 1, 0])],
        expressions: vec![(z, vec![Letter::pos(0)])],
    })
}

/// ⟨x, y, z | [x,y]z⁻¹, [x,z], [y,z]⟩ with the extension's generator order.
pub fn standard_heisenberg_presentation() -> Result<Presentation> {
    Presentation::from_text("generators: z x y\nx y x^-1 y^-1 z^-1\nx z x^-1 z^-1\ny z y^-1 z^-1\n")
}

/// Cyclic(4) as an extension of Cyclic(2) = ⟨x | x²⟩ by Cyclic(2) = ⟨u | u²⟩.
pub fn cyclic4_extension_data() -> Result<ExtensionData> {
    Ok(ExtensionData {
        family: GroupFamily::Cyclic { modulus: 4 },
        quotient: Presentation::from_text("generators: x\nx x\n")?,
        kernel: Presentation::from_text("generators: u\nu u\n")?,
        kernel_images: vec![Elem::scalar(2)],
        lifts: vec![Elem::scalar(1)],
        expressions: vec![(Elem::scalar(2), vec![Letter::pos(0)])],
    })
}

/// Center of HeisenbergZ as the kernel of the abelianization onto Z².
pub fn heisenberg_center() -> Result<Homomorphism> {
    Homomorphism::new(
        GroupFamily::HeisenbergZ,
        GroupFamily::FreeAbelian { rank: 2 },
        vec![Elem::new([1, 0]), Elem::new([0, 1]), Elem::new([0, 0])],
    )
}

/// Twenty parameter points `(constants, r, R, ρ)` for the transfer formulas.
pub fn transfer_grid() -> Vec<(QiConstants, Rational, Rational, Rational)> {
    (0..20i64)
        .map(|i| {
            let k = QiConstants {
                a: int(1 + i % 3),
                b: Rational::new(i % 4, 2),
                alpha: int(1 + i % 2),
                beta: int(i % 5),
                c: Rational::new(i % 7, 3),
                gamma: int(i % 3),
            };
            (k, int(1 + i % 4), Rational::new(3 + i, 2), int(i % 6))
        })
        .collect()
}

pub fn run_scenario(args: &ScenarioArgs, caps: &ResourceCaps) -> Result<Report> {
    let scale = args.scale.as_deref().map(parse::scale).transpose()?;
    match args.name {
        ScenarioName::Circle3r => circle_3r(args, caps),
        ScenarioName::FactorialZ => factorial_z(),
        ScenarioName::Z2Rips => {
            let z2 = GroupFamily::FreeAbelian { rank: 2 };
            let radius = args.radius.unwrap_or(8);
            let w = build_window(&z2, &GeneratingSet::standard(&z2), radius, caps)?;
            probe_scenario("z2-rips", w.space(), radius, int(1), scale.unwrap_or(int(2)), args.cap_loops.unwrap_or(12), args, caps)
        }
        ScenarioName::FreeTree => {
            let f2 = GroupFamily::Free { rank: 2 };
            let radius = args.radius.unwrap_or(5);
            let w = build_window(&f2, &GeneratingSet::standard(&f2), radius, caps)?;
            let mut report =
                probe_scenario("free-tree", w.space(), radius, int(1), scale.unwrap_or(int(1)), args.cap_loops.unwrap_or(10), args, caps)?;
            let s = &report.summary;
            let backtracks_only = s["backtrack_only"] == s["contracted"];
            report.summary["all_backtrack_only"] = json!(backtracks_only);
            if report.verdict == Verdict::Pass && !backtracks_only {
                report.verdict = Verdict::Fail;
            }
            Ok(report)
        }
        ScenarioName::SchreierF2 => {
            let mut report = ms(
                &MsArgs {
                    family: "free:2".into(),
                    gens: None,
                    target: "cyclic:2".into(),
                    images: "1;1".into(),
                    transversal: Some("e;a".into()),
                    words: 100,
                    max_len: 12,
                    seed: 1,
                },
                caps,
            )?;
            report.command = "scenario schreier-f2".into();
            let three = report.summary["generators_up_to_inversion"].as_array().map(|a| a.len()) == Some(3);
            let shorter = report.items.iter().all(|i| i["t_length"].as_u64() <= i["s_length"].as_u64());
            report.summary["three_generators_up_to_inversion"] = json!(three);
            report.summary["rewrites_no_longer"] = json!(shorter);
            if !(three && shorter) {
                report.verdict = Verdict::Fail;
            }
            Ok(report)
        }
        ScenarioName::HeisenbergExtension => heisenberg_extension(args, caps),
        ScenarioName::CoveringZ10 => covering_z10(args, caps),
        ScenarioName::QiTransfer => qi_scenario(args, caps),
        ScenarioName::FiltrationHeisenberg => {
            let h = GroupFamily::HeisenbergZ;
            let radius = args.radius.unwrap_or(6);
            let w = build_window(&h, &GeneratingSet::standard(&h), radius, caps)?;
            let probe = filtration_probe(&w, &heisenberg_center()?, radius)?;
            let mut report = Report::new("scenario filtration-heisenberg", json!({ "radius": radius, "max_n": radius }));
            report.verdict = Verdict::from_bool(probe.least_n.is_some_and(|n| n <= 4) && probe.monotone);
            report.summary = to_value(&probe);
            Ok(report)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn probe_scenario(
    name: &str,
    space: &crate::spaces::FiniteMetricSpace,
    radius: usize,
    r: Rational,
    r_prime: Rational,
    cap: usize,
    args: &ScenarioArgs,
    caps: &ResourceCaps,
) -> Result<Report> {
    if cap > caps.max_loop_length {
        return Err(Error::ResourceCap { cap: "max_loop_length", limit: caps.max_loop_length });
    }
    let mut config = ScProbeConfig::new(r, r_prime, cap);
    config.family = LoopFamily::All;
    config.budget = budget(caps, args.budget_nodes);
    config.check_fillings = true;
    config.keep_contracted = true;
    let mut probe = coarse_sc_probe(space, &config)?;
    let fillings_ok = probe.fillings_verified == probe.contracted;
    let mut report = sc_report(&format!("scenario {name}"), json!({ "radius": radius }), space, &mut probe, 3);
    report.summary["all_fillings_verified"] = json!(fillings_ok);
    if !fillings_ok && report.verdict == Verdict::Pass {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

fn circle_3r(args: &ScenarioArgs, caps: &ResourceCaps) -> Result<Report> {
    let mut report = Report::new("scenario circle-3r", json!({ "circumferences": [4, 15], "scales": [1, 4] }));
    let mut csv = String::from("R,r,outcome,expected,agrees\n");
    let mut all = true;
    let mut inconclusive = false;
    for big_r in 4..=15i64 {
        let circle = circle_space(int(big_r), big_r as usize)?;
        let idx = report.add_space(circle.space());
        for r in 1..=4i64 {
            let outcome = Contractor::new(circle.space(), int(r), budget(caps, args.budget_nodes))?.contract(&circle.full_loop(1))?;
            let expected = big_r <= 3 * r;
            let agrees = match &outcome {
                ContractionOutcome::Contracted(_) => expected,
                ContractionOutcome::Impossible(NegativeCertificate::Winding(w)) => !expected && w.winding != 0,
                _ => false,
            };
            inconclusive |= outcome.is_inconclusive();
            all &= agrees;
            certify(&mut report, idx, &outcome);
            let expected_label = if expected { "contracted" } else { "impossible" };
            csv.push_str(&format!("{big_r},{r},{},{expected_label},{agrees}\n", outcome.label()));
            report.items.push(json!({
                "R": big_r, "r": r, "outcome": outcome.label(), "expected": expected_label, "agrees": agrees,
            }));
        }
    }
    report.summary = json!({ "cases": report.items.len(), "all_agree": all });
    report.verdict = if all { Verdict::Pass } else if inconclusive { Verdict::Inconclusive } else { Verdict::Fail };
    report.csv = Some(csv);
    Ok(report)
}

fn factorial_z() -> Result<Report> {
    let mut report = Report::new("scenario factorial-z", json!({ "ells": [3, 4, 5], "control": [3, 4] }));
    let mut ok = true;
    for ell in 3..=5usize {
        let mut found = None;
        for m in 2..=ell + 2 {
            let cert = factorial_certificate(m, ell)?;
            let has = cert.has_obstruction() && cert.verify();
            report.items.push(json!({ "m": m, "ell": ell, "obstruction": has, "witness": cert.witness }));
            if has && found.is_none() {
                found = Some(m);
                report.certificates.push(Certificate::Lattice { obstruction: cert });
            }
        }
        ok &= found.is_some();
    }
    let control = factorial_certificate(3, 4)?;
    let control_clean = !control.has_obstruction() && control.verify();
    report.items.push(json!({ "m": 3, "ell": 4, "obstruction": control.has_obstruction(), "control": true }));
    report.summary = json!({ "every_ell_obstructed": ok, "control_has_no_obstruction": control_clean });
    report.verdict = Verdict::from_bool(ok && control_clean);
    Ok(report)
}

fn heisenberg_extension(args: &ScenarioArgs, caps: &ResourceCaps) -> Result<Report> {
    let radius = args.radius.unwrap_or(6);
    let mut report = Report::new("scenario heisenberg-extension", json!({ "radius": radius }));
    let p = extension_relators(&heisenberg_extension_data()?)?;
    let normalized = p.normalized();
    let standard = standard_heisenberg_presentation()?.normalized();
    let matches = normalized.relators == standard.relators && normalized.generators == standard.generators;
    let h = GroupFamily::HeisenbergZ;
    let window = build_window(&h, &GeneratingSet::standard(&h), radius, caps)?;
    let hold = relators_hold_in_window(&p, &window);
    let c4 = extension_relators(&cyclic4_extension_data()?)?;
    let v = verify_finite_presentation(&c4)?;
    let c4_ok = v.presents() && v.order == 4;
    report.items.push(json!({ "extension": "heisenberg", "presentation": p.to_text(), "normalized": normalized.to_text() }));
    report.items.push(json!({ "extension": "cyclic4", "presentation": c4.to_text(), "verification": to_value(&v) }));
    report.summary = json!({
        "matches_standard_presentation": matches,
        "relators_hold_in_window": hold.is_ok(),
        "window_error": hold.as_ref().err().map(|e| e.to_string()),
        "cyclic4_presented": c4_ok,
    });
    report.verdict = Verdict::from_bool(matches && hold.is_ok() && c4_ok);
    Ok(report)
}

fn covering_z10(args: &ScenarioArgs, caps: &ResourceCaps) -> Result<Report> {
    let radius = args.radius.unwrap_or(14);
    let b = budget(caps, args.budget_nodes);
    let mut report = Report::new("scenario covering-z10", json!({ "radius": radius, "modulus": 10 }));
    let (up, down, map) = line_over_cyclic(radius, 10, caps)?;
    let cov = CoveringMap::new(up.space(), down.space(), map)?;
    let c2 = cov.is_r_covering(&int(2));
    let c3 = cov.is_r_covering(&int(3));
    let inj2 = covering_injectivity_check(&cov, int(1), int(2), b)?;
    let inj4 = covering_injectivity_check(&cov, int(1), int(4), b)?;

    let (up6, down6, map6) = line_over_cyclic(8, 6, caps)?;
    let cov6 = CoveringMap::new(up6.space(), down6.space(), map6)?;
    let d = |v: i64| down6.index_of(&Elem::scalar(v)).expect("residue");
    let zero = up6.index_of(&Elem::scalar(0)).expect("origin");
    let lift_of = |lp: Vec<usize>| -> Result<(ContractionOutcome, Option<LiftOutcome>)> {
        let outcome = Contractor::new(down6.space(), int(2), b)?.contract(&lp)?;
        let lift = outcome.moves().map(|m| cov6.lift_homotopy(m, zero)).transpose()?;
        Ok((outcome, lift))
    };
    let (wind_outcome, wind_lift) = lift_of(vec![d(0), d(2), d(4), d(0)])?;
    let (flat_outcome, flat_lift) = lift_of(vec![d(0), d(1), d(2), d(3), d(2), d(1), d(0)])?;
    let winding_fails = matches!(&wind_lift, Some(LiftOutcome::Failed(f)) if f.endpoints_differ);
    let flat_lifts = matches!(&flat_lift, Some(LiftOutcome::Lifted { .. }));

    let witness_ok = matches!(
        &c3.witness,
        Some(crate::coarse::CoveringWitness::DistanceChanged { first, second, upstairs, downstairs })
            if first == "0" && second == "6" && *upstairs == int(6) && *downstairs == int(4)
    );
    let inj2_ok = !inj2.contradiction && inj2.covering.is_covering && inj2.failed_hypotheses.len() == 1
        && inj2.failed_hypotheses[0].contains("simply connected");
    let inj4_ok = !inj4.contradiction && !inj4.covering.is_covering && inj4.failed_hypotheses.len() == 1
        && inj4.failed_hypotheses[0].contains("covering");
    report.items.push(json!({ "check": "2-covering", "result": to_value(&c2) }));
    report.items.push(json!({ "check": "3-covering", "result": to_value(&c3) }));
    report.items.push(json!({ "check": "injectivity r=1 R=2", "result": to_value(&inj2) }));
    report.items.push(json!({ "check": "injectivity r=1 R=4", "result": to_value(&inj4) }));
    report.items.push(json!({
        "check": "lift of the winding loop over cyclic:6",
        "contraction": wind_outcome.label(),
        "result": to_value(&wind_lift),
    }));
    report.items.push(json!({
        "check": "lift of a null-winding loop over cyclic:6",
        "contraction": flat_outcome.label(),
        "result": to_value(&flat_lift),
    }));
    report.summary = json!({
        "is_2_covering": c2.is_covering,
        "is_3_covering": c3.is_covering,
        "witness_d_0_6": witness_ok,
        "injectivity_r1_R2_hypothesis_identified": inj2_ok,
        "injectivity_r1_R4_hypothesis_identified": inj4_ok,
        "winding_lift_fails": winding_fails,
        "null_winding_lift_completes": flat_lifts,
    });
    report.verdict =
        Verdict::from_bool(c2.is_covering && witness_ok && inj2_ok && inj4_ok && winding_fails && flat_lifts);
    let _ = outcome_verdict;
    Ok(report)
}

fn qi_scenario(args: &ScenarioArgs, caps: &ResourceCaps) -> Result<Report> {
    let b = args.radius.unwrap_or(4) as i64;
    let mut report = Report::new("scenario qi-transfer", json!({ "box": b }));
    let literal = even_sublattice_certificate(b, int(0), caps)?;
    let repaired = even_sublattice_certificate(b, int(2), caps)?;
    let mut perturbed = repaired.clone();
    perturbed.constants.beta = int(1);
    let v_literal = literal.validate();
    let v_repaired = repaired.validate();
    let v_perturbed = perturbed.validate();
    for (cert, v) in [(&literal, &v_literal), (&repaired, &v_repaired), (&perturbed, &v_perturbed)] {
        report.certificates.push(Certificate::Qi { certificate: cert.to_json(), expect_valid: v.valid });
    }
    // Pull back contractions of the images of short loops in the sublattice.
    let big_r = args.scale.as_deref().map(parse::scale).transpose()?.unwrap_or(int(4));
    let contractor = Contractor::new(&repaired.y, big_r, budget(caps, args.budget_nodes))?;
    let mut pulled = 0;
    let mut pulled_ok = 0;
    let x_idx = report.add_space(&repaired.x);
    for lp in based_loops(&repaired.x, &int(2), args.cap_loops.unwrap_or(4), LoopFamily::Irreducible) {
        let pushed: Vec<usize> = lp.iter().map(|&p| repaired.f[p]).collect();
        if let ContractionOutcome::Contracted(moves) = contractor.contract(&pushed)? {
            pulled += 1;
            let seq = repaired.pull_back(&lp, &moves)?;
            if seq.verify_contraction(&repaired.x).is_ok() {
                pulled_ok += 1;
            }
            if report.certificates.len() < 6 {
                report.certificates.push(Certificate::Contraction { space: x_idx, moves: seq });
            }
        }
    }
    let grid: Vec<_> = transfer_grid()
        .into_iter()
        .map(|(k, r, big, rho)| {
            let t = crate::coarse::qi_transfer_constants(&k, r, big, rho).expect("grid constants are nonnegative");
            json!({
                "constants": to_value(&k),
                "r": format_rational(&r), "R": format_rational(&big), "rho": format_rational(&rho),
                "r_prime": format_rational(&t.r_prime), "rho_prime": format_rational(&t.rho_prime),
            })
        })
        .collect();
    report.items = grid;
    report.summary = json!({
        "literal_gamma_0": to_value(&v_literal),
        "gamma_2": to_value(&v_repaired),
        "beta_understated": to_value(&v_perturbed),
        "pulled_back": pulled,
        "pulled_back_verified": pulled_ok,
    });
    report.verdict = Verdict::from_bool(
        v_repaired.valid && !v_perturbed.valid && !v_perturbed.violations.is_empty() && pulled > 0 && pulled == pulled_ok,
    );
    Ok(report)
}
