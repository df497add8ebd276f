//! End-to-end checks, one line per criterion. Run with
//! `cargo test -p mindswap --test acceptance --release` for honest timings.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mindswap::infinite::{
    compose_all, invert_finitary_two_step, invert_shift_three_step, parse_swaps, render,
    verify_infinite_plan, CarrierPoint, SwapClassification, TailMap,
};
use mindswap::{
    generator_identity_check, insider_count, invert_transposition_even_m, plan_product,
    search_min_plan, solve_m_machine, solve_three_machine_optimal, solve_two_machine, taucar,
    verify_plan, Cycle, Element, MachineMove, Parity, Permutation, RuleSet,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use Element::{Insider as A, Outsider as X};

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn swap(a: Element, b: Element) -> Cycle {
    Cycle::transposition(a, b).unwrap()
}

fn random_perm(rng: &mut StdRng, points: &[usize]) -> Permutation {
    let mut image = points.to_vec();
    image.shuffle(rng);
    Permutation::from_pairs(points.iter().zip(&image).map(|(&a, &b)| (A(a), A(b)))).unwrap()
}

fn distinct_supports(moves: &[MachineMove]) -> bool {
    let sets: BTreeSet<_> = moves.iter().map(MachineMove::support).collect();
    sets.len() == moves.len()
}

/// Cycle types of `n` with every part at least 2, largest part first.
fn cycle_types(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in (2..=max.min(n)).rev() {
        for mut rest in cycle_types(n - k, k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn from_cycle_type(parts: &[usize]) -> Permutation {
    let mut next = 1;
    let cycles: Vec<Permutation> = parts
        .iter()
        .map(|&k| {
            let c = Cycle::new((next..next + k).map(A).collect()).unwrap();
            next += k;
            c.to_permutation()
        })
        .collect();
    Permutation::product(&cycles)
}

fn all_perms(n: usize) -> Vec<Permutation> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut images = Vec::new();
    rec(&mut (1..=n).collect(), &mut Vec::new(), &mut images);
    images
        .into_iter()
        .map(|img| Permutation::from_pairs(img.iter().enumerate().map(|(i, &j)| (A(i + 1), A(j)))).unwrap())
        .collect()
}

fn bound(sigma: &Permutation) -> usize {
    (sigma.support().len() + sigma.cycle_count()) / 2
}

fn z() -> CarrierPoint {
    CarrierPoint::named("z")
}

fn finitary_target(sigma: &Permutation) -> TailMap {
    let pairs = sigma.inverse().mapping().map(|(k, v)| (k.index() as u64, v.index() as u64)).collect::<Vec<_>>();
    TailMap::from_finitary(0, pairs).unwrap().with_fixed(z()).unwrap()
}

fn criterion_1() -> Result<(), String> {
    let plan = solve_two_machine(&perm("(1 2)")).map_err(|e| e.to_string())?;
    // (x y)(2 x)(1 y)(2 y)(1 x), rightmost first
    let expected = vec![swap(A(1), X(1)), swap(A(2), X(2)), swap(A(1), X(2)), swap(A(2), X(1)), swap(X(1), X(2))];
    if plan.moves != expected {
        return Err(format!("got {:?}", plan.moves));
    }
    let report = verify_plan(&perm("(1 2)"), &plan.machine_moves(), &RuleSet::new(2, vec![X(1), X(2)]));
    report.is_clean().then_some(()).ok_or(format!("{report:?}"))
}

fn criterion_2() -> Result<(), String> {
    for k in 2..=12 {
        let sigma = Cycle::new((1..=k).map(A).collect()).unwrap().to_permutation();
        let plan = solve_two_machine(&sigma).map_err(|e| e.to_string())?;
        if plan.len() != k + 3 || plan.product() != sigma.inverse() {
            return Err(format!("k = {k}: {} moves", plan.len()));
        }
    }
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(3);
    let xy = swap(X(1), X(2)).to_permutation();
    for _ in 0..200 {
        let k = rng.gen_range(2..=10);
        let mut pts: Vec<usize> = (1..=20).collect();
        pts.shuffle(&mut rng);
        let tau = Cycle::new(pts[..k].iter().map(|&i| A(i)).collect()).unwrap();
        let written: Vec<Permutation> = taucar(&tau, X(1), X(2))
            .map_err(|e| e.to_string())?
            .iter()
            .map(Cycle::to_permutation)
            .collect();
        if Permutation::product(&written).compose(&tau.to_permutation()) != xy {
            return Err(format!("fails for {tau}"));
        }
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(4);
    for m in 3..=6 {
        let pool = if m % 2 == 1 { m - 2 } else { 3 * (m / 2 - 1) };
        for _ in 0..300 {
            let n = rng.gen_range(m.max(2)..=8);
            let mut sigma = random_perm(&mut rng, &(1..=n).collect::<Vec<_>>());
            if m % 2 == 1 && sigma.parity() == Parity::Odd {
                sigma = perm("(1 2)").compose(&sigma);
            }
            let plan = solve_m_machine(&sigma, m).map_err(|e| format!("m = {m}, {sigma}: {e}"))?;
            let ok = plan_product(&plan.moves) == Some(sigma.inverse())
                && plan.moves.iter().all(|mv| mv.len() == m && !mv.has_repeats())
                && distinct_supports(&plan.moves)
                && plan.outsider_pool.len() == pool
                && verify_plan(&sigma, &plan.moves, &RuleSet::new(m, plan.outsider_pool.clone())).is_clean();
            if !ok {
                return Err(format!("m = {m}, sigma = {sigma}"));
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    for m in [4, 6, 8] {
        let h = m / 2 - 1;
        let xs: Vec<Element> = (1..=3 * h).map(X).collect();
        let moves = invert_transposition_even_m(A(1), A(2), &xs[..h], &xs[h..2 * h], &xs[2 * h..], m)
            .map_err(|e| e.to_string())?;
        if plan_product(&moves) != Some(perm("(1 2)")) || !distinct_supports(&moves) {
            return Err(format!("m = {m}"));
        }
    }
    Ok(())
}

fn criterion_6() -> Result<(), String> {
    for m in [4, 6, 8] {
        let mut elements = vec![X(2), X(1)];
        elements.extend((1..=m - 2).map(A));
        if !generator_identity_check(m, &elements).map_err(|e| e.to_string())? {
            return Err(format!("m = {m}"));
        }
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    let mut checked = 0;
    for n in 0..=9 {
        for parts in cycle_types(n, n) {
            if parts.iter().filter(|&&k| k % 2 == 0).count() % 2 == 1 {
                continue;
            }
            let sigma = from_cycle_type(&parts);
            let r = parts.len();
            let plan = solve_three_machine_optimal(&sigma).map_err(|e| e.to_string())?;
            let count = insider_count(&plan.moves, X(1)).map_err(|e| e.to_string())?;
            let clean = verify_plan(&sigma, &plan.moves, &RuleSet::new(3, vec![X(1)])).is_clean();
            if plan.moves.len() != (n + r) / 2 || count != n + r || plan.product() != sigma.inverse() || !clean {
                return Err(format!("cycle type {parts:?}"));
            }
            checked += 1;
        }
    }
    (checked > 0).then_some(()).ok_or("no cycle types".into())
}

fn criterion_8() -> Result<(), String> {
    let evens: Vec<Permutation> = all_perms(5).into_iter().filter(|p| p.parity() == Parity::Even).collect();
    for d in 1..=2 {
        let rules = RuleSet::with_outsider_count(3, d);
        for sigma in &evens {
            let b = bound(sigma);
            let found = search_min_plan(sigma, &rules, b).map_err(|e| e.to_string())?;
            match found {
                Some(plan) if plan.len() == b && verify_plan(sigma, &plan, &rules).is_clean() => {}
                other => return Err(format!("d = {d}, {sigma}: {other:?}")),
            }
            if b > 0 && search_min_plan(sigma, &rules, b - 1).map_err(|e| e.to_string())?.is_some() {
                return Err(format!("d = {d}, {sigma}: shorter plan exists"));
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    let rules = RuleSet::with_outsider_count(2, 2);
    let sigma = perm("(1 2)");
    let five = search_min_plan(&sigma, &rules, 5).map_err(|e| e.to_string())?;
    let four = search_min_plan(&sigma, &rules, 4).map_err(|e| e.to_string())?;
    match (five, four) {
        (Some(plan), None) if plan.len() == 5 => Ok(()),
        other => Err(format!("{other:?}")),
    }
}

fn criterion_10() -> Result<(), String> {
    use SwapClassification::{Forgetful, Retentive};
    let plan = invert_shift_three_step(0, &z()).map_err(|e| e.to_string())?;
    let target = TailMap::shift(0, -1).with_fixed(z()).map_err(|e| e.to_string())?;
    let report = verify_infinite_plan(&plan, &target);
    let classes: Vec<_> = report.steps.iter().map(|s| s.classification).collect();
    if !report.matches_target || !report.participants_distinct || classes != [Retentive, Forgetful, Retentive] {
        return Err(format!("shift inverse: {classes:?}"));
    }

    let mut rng = StdRng::seed_from_u64(10);
    let mut done = 0;
    while done < 200 {
        let k = rng.gen_range(2..=12);
        let mut pts: Vec<usize> = (1..=16).collect();
        pts.shuffle(&mut rng);
        let sigma = random_perm(&mut rng, &pts[..k]);
        if sigma.is_identity() {
            continue;
        }
        let plan = invert_finitary_two_step(&sigma, 0, &z()).map_err(|e| e.to_string())?;
        let report = verify_infinite_plan(&plan, &finitary_target(&sigma));
        let classes: Vec<_> = report.steps.iter().map(|s| s.classification).collect();
        if plan.len() != 2 || classes != [Forgetful, Retentive] || !report.matches_target || !report.participants_distinct {
            return Err(format!("sigma = {sigma}: {classes:?}"));
        }
        if compose_all(&plan) != finitary_target(&sigma) {
            return Err(format!("sigma = {sigma}"));
        }
        done += 1;
    }
    Ok(())
}

fn criterion_11() -> Result<(), String> {
    let sigma = perm("(1 2)(3 4 5)");
    let plan = invert_finitary_two_step(&sigma, 0, &z()).map_err(|e| e.to_string())?;
    let printed = parse_swaps("(⋯ a7 a6 a5 z a1)(a1 a2 z a5 a4 a3 a6 a7 ⋯)").map_err(|e| e.to_string())?;
    if plan != printed {
        return Err("plan differs from the printed solution".into());
    }
    let shown: Vec<String> = plan.iter().map(|f| render(f, 2)).collect();
    if shown != ["(a1 a2 z a5 a4 a3 a6 a7 ⋯)", "(⋯ a7 a6 a5 z a1)"] {
        return Err(format!("rendered {shown:?}"));
    }
    Ok(())
}

type Check = fn() -> Result<(), String>;

fn main() {
    let criteria: [(&str, Duration, Check); 11] = [
        ("two-machine base case", Duration::from_millis(1), criterion_1),
        ("two-machine single cycle counts", Duration::from_secs(1), criterion_2),
        ("taucar identity", Duration::from_secs(1), criterion_3),
        ("m-machine soundness", Duration::from_secs(30), criterion_4),
        ("even-m transposition", Duration::from_secs(1), criterion_5),
        ("generator identity", Duration::from_secs(1), criterion_6),
        ("optimal 3-machine counts", Duration::from_secs(10), criterion_7),
        ("optimality certification", Duration::from_secs(300), criterion_8),
        ("2-machine minimality", Duration::from_secs(1), criterion_9),
        ("infinite machine", Duration::from_secs(5), criterion_10),
        ("worked finitary example", Duration::from_secs(1), criterion_11),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(()) if elapsed <= *limit => Ok(()),
            Ok(()) => Err(format!("took {elapsed:?}, limit {limit:?}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
