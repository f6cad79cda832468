//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use hiergame::lp::{Rational, Sense};
use hiergame::oracle::{extremal_point, oracle_class, verify_representation};
use hiergame::structural::cmd_structural;
use hiergame::sweep::{grid_specs, Grid};
use hiergame::transforms::{dual_explicit, dual_spec, minor, transfer_cert, MinorStep};
use hiergame::{classify_rough, Class, Coalition, HierSpec, Kind, Mode, Multiset, RoughCert};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn grid(kind: Kind, levels: usize, nmax: u32) -> Vec<HierSpec> {
    grid_specs(&Grid {
        kind,
        levels,
        nmax,
        kmax: None,
    })
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn passer_dummy_free(s: &HierSpec) -> bool {
    let r = s.canon_check();
    !r.passer_first_level && !r.dummy_last_level
}

/// Classifier and oracle classes of every spec, with the first mismatch.
fn cross_check(specs: &[HierSpec]) -> (Vec<(HierSpec, Class, String)>, Vec<String>) {
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for s in specs {
        let v = match classify_rough(s) {
            Ok(v) => v,
            Err(e) => {
                bad.push(format!("{s}: classifier error {e}"));
                continue;
            }
        };
        let game = s.realize().expect("grid specs realize");
        let (oc, _) = oracle_class(&game).expect("oracle runs");
        if oc != v.class {
            bad.push(format!("{s}: classifier {} oracle {oc}", v.class));
        }
        if let Some(c) = &v.certificate {
            let mode = if v.class == Class::Weighted {
                Mode::Weighted
            } else {
                Mode::Rough
            };
            if !verify_representation(&game, c, mode).expect("verify runs") {
                bad.push(format!("{s}: certificate {c} does not verify"));
            }
        }
        rows.push((s.clone(), v.class, v.matched_case));
    }
    (rows, bad)
}

fn criterion_1() -> Outcome {
    let specs = grid(Kind::Disjunctive, 2, 6);
    let (rows, bad) = cross_check(&specs);
    let got: BTreeSet<(Vec<u32>, Vec<u32>)> = rows
        .iter()
        .filter(|(_, c, _)| *c == Class::RoughNotWeighted)
        .map(|(s, _, _)| (s.n().to_vec(), s.k().to_vec()))
        .collect();
    // Two-level list: k = (2,4) with n1 >= 2, n2 >= 4; k = (k,k+2), k > 2,
    // n1 >= k, n2 = 4.
    let want: BTreeSet<(Vec<u32>, Vec<u32>)> = specs
        .iter()
        .filter(|s| {
            let (n, k) = (s.n(), s.k());
            (k == [2, 4] && n[0] >= 2 && n[1] >= 4)
                || (k[0] > 2 && k[1] == k[0] + 2 && n[0] >= k[0] && n[1] == 4)
        })
        .map(|s| (s.n().to_vec(), s.k().to_vec()))
        .collect();
    let pass = bad.is_empty() && got == want;
    Outcome {
        pass,
        detail: format!(
            "{} specs, {} rough_not_weighted, expected {}, mismatches {}{}",
            specs.len(),
            got.len(),
            want.len(),
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn criterion_2() -> Outcome {
    let specs = grid(Kind::Disjunctive, 3, 4);
    let (rows, bad) = cross_check(&specs);
    let allowed = ["Thm12(iv)", "Thm12(v)", "Thm12(vi)"];
    let mut stray = Vec::new();
    let mut rough = 0;
    for (s, c, case) in &rows {
        if *c == Class::RoughNotWeighted && passer_dummy_free(s) {
            rough += 1;
            if !allowed.contains(&case.as_str()) {
                stray.push(format!("{s} -> {case}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && stray.is_empty() && rough > 0,
        detail: format!(
            "{} specs, {} passer/dummy-free rough_not_weighted, cases outside (iv)-(vi) {}, mismatches {}{}",
            specs.len(),
            rough,
            stray.len(),
            bad.len(),
            bad.first().or(stray.first()).map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut specs = grid(Kind::Disjunctive, 2, 6);
    specs.extend(grid(Kind::Disjunctive, 3, 4));
    let mut bad = Vec::new();
    for s in &specs {
        let run = || -> hiergame::Result<Option<String>> {
            let v = classify_rough(s)?;
            let d = dual_spec(s)?;
            let dv = classify_rough(&d)?;
            let game = s.realize()?;
            let dual_game = dual_explicit(&game)?;
            if d.realize()? != dual_game {
                return Ok(Some(format!("{s}: {d} does not realize the dual")));
            }
            let (oc, _) = oracle_class(&dual_game)?;
            if dv.class != v.class || oc != v.class {
                return Ok(Some(format!(
                    "{s}: class {} dual {} oracle on dual {oc}",
                    v.class, dv.class
                )));
            }
            Ok(None)
        };
        match run() {
            Ok(None) => {}
            Ok(Some(m)) => bad.push(m),
            Err(e) => bad.push(format!("{s}: {e}")),
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} duals, mismatches {}{}",
            specs.len(),
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn criterion_4() -> Outcome {
    let spec = HierSpec::disjunctive(vec![3, 3, 3], vec![2, 3, 5]).unwrap();
    let game = spec.realize().unwrap();
    let obj = vec![Rational::zero(), Rational::zero(), Rational::one()];
    let max_w3 = extremal_point(&game, &obj, Sense::Maximize).map(|p| p.0);
    let cert = RoughCert::new(Rational::one(), vec![q(1, 2), q(1, 2), Rational::zero()]).unwrap();
    let verifies = verify_representation(&game, &cert, Mode::Rough).unwrap();
    let weighted = oracle_class(&game).unwrap().0 == Class::Weighted;
    Outcome {
        pass: max_w3 == Ok(Rational::zero()) && verifies && !weighted,
        detail: format!(
            "max w3 = {}, [1; 1/2, 1/2, 0] verifies: {verifies}",
            max_w3.map_or_else(|e| e.to_string(), |v| v.to_string())
        ),
    }
}

fn criterion_5() -> Outcome {
    let mut specs = grid(Kind::Disjunctive, 2, 6);
    specs.extend(grid(Kind::Disjunctive, 3, 4));
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in specs.iter().filter(|s| passer_dummy_free(s)) {
        let v = classify_rough(s).unwrap();
        if v.class != Class::RoughNotWeighted {
            continue;
        }
        checked += 1;
        // M = {1^(k1-1), 2^(k2-k1), ..., m^(km-k(m-1))}.
        let k = s.k();
        let m: Vec<Rational> = (0..k.len())
            .map(|i| {
                let prev = if i == 0 { 1 } else { k[i - 1] };
                Rational::from_integer((k[i] - prev).into())
            })
            .collect();
        let game = s.realize().unwrap();
        match extremal_point(&game, &m, Sense::Minimize) {
            Ok((v, _)) if v == Rational::one() => {}
            Ok((v, _)) => bad.push(format!("{s}: min w(M) = {v}")),
            Err(e) => bad.push(format!("{s}: {e}")),
        }
    }
    Outcome {
        pass: bad.is_empty() && checked > 0,
        detail: format!(
            "{checked} rough_not_weighted specs, min w(M) != 1 in {}{}",
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut counts = Vec::new();
    let mut bad = Vec::new();
    for kind in [Kind::Disjunctive, Kind::Conjunctive] {
        for levels in [4, 5] {
            // Conjunctive: blockers and dummies are the duals of passers and
            // dummies.
            let specs: Vec<HierSpec> = grid(kind, levels, 3)
                .into_iter()
                .filter(|s| {
                    let r = s.canon_check();
                    !r.passer_first_level && !r.blocker_first_level && !r.dummy_last_level
                })
                .collect();
            counts.push(format!("{kind} m={levels}: {}", specs.len()));
            let (rows, mismatches) = cross_check(&specs);
            bad.extend(mismatches);
            for (s, c, _) in rows {
                if c != Class::NotRough {
                    bad.push(format!("{s} is {c}"));
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{}; not all not_rough in {}{}",
            counts.join(", "),
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut complete = 0;
    let mut universes = 0;
    let mut bad = Vec::new();
    for a in 1..=6u32 {
        for b in 0..=(6 - a) {
            let counts = if b == 0 { vec![a] } else { vec![a, b] };
            let u = Multiset::new(counts).unwrap();
            match cmd_structural(&u) {
                Ok(r) => {
                    universes += 1;
                    complete += r.complete;
                    if !r.holds() {
                        bad.push(format!("{u}: {} violations", r.violations.len()));
                    }
                }
                Err(e) => bad.push(format!("{u}: {e}")),
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && complete > 0,
        detail: format!(
            "{universes} universes, {complete} complete games, failures {}{}",
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn random_removed(rng: &mut ChaCha8Rng, universe: &Multiset) -> Option<Coalition> {
    let counts: Vec<u32> = universe
        .counts()
        .iter()
        .map(|&n| rng.gen_range(0..=n))
        .collect();
    let a = Coalition::from_counts(counts);
    (a != universe.full()).then_some(a)
}

fn criterion_8() -> Outcome {
    let mut pool = Vec::new();
    for kind in [Kind::Disjunctive, Kind::Conjunctive] {
        pool.extend(grid(kind, 2, 6));
        pool.extend(grid(kind, 3, 4));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let sample: Vec<HierSpec> = pool.choose_multiple(&mut rng, 200).cloned().collect();
    let mut transfers = 0;
    let mut bad = Vec::new();
    for s in &sample {
        let mut run = || -> hiergame::Result<()> {
            let g = s.realize()?;
            let gd = dual_explicit(&g)?;
            if dual_explicit(&gd)? != g {
                bad.push(format!("{s}: dual of dual differs"));
            }
            if dual_spec(&dual_spec(s)?)?.realize()? != g {
                bad.push(format!("{s}: spec dual of dual differs"));
            }
            let (class, cert) = oracle_class(&g)?;
            let mode = if class == Class::Weighted {
                Mode::Weighted
            } else {
                Mode::Rough
            };
            for _ in 0..4 {
                let Some(a) = random_removed(&mut rng, g.universe()) else {
                    continue;
                };
                let sub = MinorStep::subgame(a.clone());
                let red = MinorStep::reduced(a);
                if dual_explicit(&minor(&g, &sub)?)? != minor(&gd, &red)? {
                    bad.push(format!("{s}: (G_A)* != (G*)^A for A = {}", sub.removed));
                }
                if dual_explicit(&minor(&g, &red)?)? != minor(&gd, &sub)? {
                    bad.push(format!("{s}: (G^A)* != (G*)_A for A = {}", sub.removed));
                }
                let Some(cert) = &cert else { continue };
                for step in [&sub, &red] {
                    if let Some(t) = transfer_cert(cert, g.universe(), step) {
                        transfers += 1;
                        if !verify_representation(&minor(&g, step)?, &t, mode)? {
                            bad.push(format!("{s}: transferred {t} fails on {:?} minor", step.kind));
                        }
                    }
                }
            }
            Ok(())
        };
        if let Err(e) = run() {
            bad.push(format!("{s}: {e}"));
        }
    }
    Outcome {
        pass: bad.is_empty() && sample.len() == 200,
        detail: format!(
            "{} games, {transfers} certificate transfers, failures {}{}",
            sample.len(),
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("two-level exhaustive cross-check", criterion_1),
        ("three-level cross-check", criterion_2),
        ("conjunctive duals", criterion_3),
        ("forced zero weight", criterion_4),
        ("saturation w(M) = 1", criterion_5),
        ("four- and five-level impossibility", criterion_6),
        ("structural characterization", criterion_7),
        ("duality and minor algebra", criterion_8),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "{} criterion {} ({name}): {} [exact; {:.1?}]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
