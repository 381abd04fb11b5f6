//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use positroid::essential::{
    connected_entries, core, excess, permutation_from_family, rank_from_connected,
    rank_from_family, validate_chess, Entry,
};
use positroid::geometry::{
    bases, codim1_boundary_count, codim_from_family, facet_system, length, satisfies_exchange,
};
use positroid::realize::{is_positively_realizing, permutation_from_matrix, RationalMatrix};
use positroid::retrieval::{replay, retrieve_traced};
use positroid::smallrank::{deficient_flats, DeficientFlat};
use positroid::{
    ranked_essential_family, retrieve, BoundedAffinePermutation, CyclicInterval, RankConditionSet,
    RankedEssentialFamily,
};
use rand::SeedableRng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Median wall time of `reps` runs.
fn median_time<T>(reps: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let t = Instant::now();
        last = Some(f());
        times.push(t.elapsed());
    }
    times.sort();
    (last.unwrap(), times[reps / 2])
}

fn within(d: Duration, limit: Duration) -> Result<(), String> {
    check(d < limit, || format!("took {d:?}, limit {limit:?}"))
}

/// Runs `f` over every permutation of each size, in parallel; returns the
/// number checked or the first failure.
fn exhaustive(
    sizes: std::ops::RangeInclusive<usize>,
    f: impl Fn(&BoundedAffinePermutation) -> Result<(), String> + Sync,
) -> Result<usize, String> {
    let mut total = 0;
    for n in sizes {
        let perms = all_perms(n);
        perms
            .par_iter()
            .try_for_each(|p| f(p).map_err(|e| format!("{p}: {e}")))?;
        total += perms.len();
    }
    Ok(total)
}

fn example() -> BoundedAffinePermutation {
    perm(&[3, 4, 8, 7, 6, 9, 10, 13])
}

fn sorted_entries(f: &RankedEssentialFamily) -> Vec<Entry> {
    let mut v = f.entries().to_vec();
    v.sort();
    v
}

fn c1() -> Outcome {
    let p = example();
    let (f, t) = median_time(101, || ranked_essential_family(&p));
    let want = fam(8, 3, &[(1, 5, 2), (2, 1, 4), (2, 4, 4)]);
    check(sorted_entries(&f) == sorted_entries(&want), || {
        format!("got {f}")
    })?;
    within(t, Duration::from_millis(1))?;
    Ok(format!("{f} in {t:?}"))
}

fn c2() -> Outcome {
    let p = perm(&[3, 10, 8, 6, 13, 11, 9, 16, 14]);
    let (f, t) = median_time(101, || ranked_essential_family(&p));
    let want = fam(
        9,
        5,
        &[
            (2, 1, 3),
            (2, 4, 3),
            (2, 7, 3),
            (4, 3, 7),
            (4, 6, 7),
            (4, 9, 7),
        ],
    );
    check(sorted_entries(&f) == sorted_entries(&want), || {
        format!("got {f}")
    })?;
    check(f.len() == 7, || format!("{} entries", f.len()))?;
    let table = excess(&f);
    for e in f.non_full() {
        let v = table.get(&e.interval).unwrap();
        check(v == 1, || format!("excess of {} is {v}", e.interval))?;
    }
    let c = core(&f);
    check(c == f.entries(), || format!("core {c:?}"))?;
    within(t, Duration::from_millis(1))?;
    let full = table.get(&CyclicInterval::full(9)).unwrap();
    Ok(format!("7 entries, essential excesses all 1, core = family, full-set recursion value {full}, in {t:?}"))
}

fn c3() -> Outcome {
    let conditions =
        RankConditionSet::from_intervals(5, [(1, iv(5, 3, 2)), (3, iv(5, 1, 5))]).unwrap();
    let ((result, events), t) = median_time(101, || retrieve_traced(&conditions));
    let p = result.map_err(|e| e.to_string())?;
    check(p == perm(&[5, 6, 4, 7, 8]), || format!("got {p}"))?;
    let replayed = replay(5, &events).map_err(|e| e.to_string())?.permutation();
    check(replayed.as_ref() == Some(&p), || {
        format!("replay gave {replayed:?}")
    })?;
    within(t, Duration::from_millis(1))?;
    Ok(format!("{p}, replay matches, in {t:?}"))
}

fn c4() -> Outcome {
    let f = fam(6, 4, &[(2, 1, 3), (2, 3, 3), (3, 1, 5)]);
    let connected = connected_entries(&f);
    check(connected.len() == 4, || format!("connected {connected:?}"))?;
    let c = core(&f);
    let want: Vec<Entry> = f
        .entries()
        .iter()
        .filter(|e| e.interval != iv(6, 1, 5))
        .copied()
        .collect();
    check(c == want, || format!("core {c:?}"))?;
    Ok("all 4 connected, core drops (3,[1,5])".into())
}

fn c5() -> Outcome {
    let p = example();
    let (l, c) = (length(&p), codim_from_family(&ranked_essential_family(&p)));
    check(l == 5 && c == 5, || format!("length {l}, codim {c}"))?;
    let mut count = 0;
    for n in 1..=10 {
        for k in 0..=n {
            let u = BoundedAffinePermutation::uniform(k, n);
            let (l, c) = (length(&u), codim_from_family(&ranked_essential_family(&u)));
            check(l == 0 && c == 0, || {
                format!("uniform {k},{n}: length {l}, codim {c}")
            })?;
            count += 1;
        }
    }
    Ok(format!("example 5 = 5, {count} uniform cases 0 = 0"))
}

fn c6() -> Outcome {
    let p = example();
    let t = Instant::now();
    let count = codim1_boundary_count(&p).map_err(|e| e.to_string())?;
    let t = t.elapsed();
    check(count == 9, || format!("count {count}"))?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("9 boundaries in {t:?}"))
}

fn c7() -> Outcome {
    let t = Instant::now();
    let total = exhaustive(1..=7, |p| {
        let f = ranked_essential_family(p);
        let back = permutation_from_family(&f).map_err(|e| e.to_string())?;
        check(&back == p, || format!("axioms gave {back}"))?;
        let got = retrieve(&RankConditionSet::from_family(&f)).map_err(|e| e.to_string())?;
        check(&got == p, || format!("retrieve gave {got}"))?;
        let v = validate_chess(&f);
        check(v.is_empty(), || format!("{} violations", v.len()))
    })?;
    let t = t.elapsed();
    within(t, Duration::from_secs(300))?;
    Ok(format!("{total} permutations in {t:?}"))
}

fn ranks_agree(p: &BoundedAffinePermutation) -> Result<(), String> {
    let f = ranked_essential_family(p);
    for i in CyclicInterval::all(p.n()) {
        let want = p.rank_interval(&i);
        let (a, b) = (rank_from_family(&f, &i), rank_from_connected(&f, &i));
        check(a == want && b == want, || {
            format!("{i}: {a}, {b}, expected {want}")
        })?;
    }
    Ok(())
}

fn c8() -> Outcome {
    let total = exhaustive(1..=7, ranks_agree)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let random: Vec<_> = (0..10_000).map(|_| random_perm(&mut rng, 12)).collect();
    random
        .par_iter()
        .try_for_each(|p| ranks_agree(p).map_err(|e| format!("{p}: {e}")))?;
    Ok(format!("{total} exhaustive + 10000 random at n=12"))
}

fn c9() -> Outcome {
    let total = exhaustive(1..=7, |p| {
        let (n, k) = (p.n() as i64, p.rank() as i64);
        let l = length(p) as i64;
        let c = codim_from_family(&ranked_essential_family(p));
        check(l == c && (0..=k * (n - k)).contains(&c), || {
            format!("length {l}, codim {c}")
        })
    })?;
    Ok(format!("{total} permutations"))
}

fn c10() -> Outcome {
    let total = exhaustive(1..=8, |p| {
        let f = ranked_essential_family(p);
        let b = bases(&f).map_err(|e| e.to_string())?;
        check(!b.is_empty(), || "no bases".into())?;
        check(satisfies_exchange(&b), || "exchange fails".into())?;
        let mut points = facet_system(&f)
            .lattice_points()
            .map_err(|e| e.to_string())?;
        points.sort_unstable();
        let mut sorted = b;
        sorted.sort_unstable();
        check(points == sorted, || {
            "lattice points differ from bases".into()
        })
    })?;
    Ok(format!("{total} permutations"))
}

fn c11() -> Outcome {
    let total = exhaustive(1..=6, |p| {
        let n = p.n();
        let c = core(&ranked_essential_family(p));
        let got = retrieve(&RankConditionSet::from_entries(n, &c)).map_err(|e| e.to_string())?;
        check(&got == p, || format!("core retrieves {got}"))?;
        for skip in 0..c.len() {
            let rest = c
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, e)| e);
            let got = retrieve(&RankConditionSet::from_entries(n, rest));
            check(got.as_ref() != Ok(p), || {
                format!("still retrieved without {:?}", c[skip])
            })?;
        }
        Ok(())
    })?;
    Ok(format!("{total} permutations"))
}

fn c12() -> Outcome {
    let mut total = 0;
    for n in 3..=8 {
        let perms: Vec<_> = all_perms(n)
            .into_iter()
            .filter(|p| p.rank() == 2 && p.loops().is_empty())
            .collect();
        perms.par_iter().try_for_each(|p| {
            let f = ranked_essential_family(p);
            let mut want: Vec<DeficientFlat> = f
                .entries()
                .iter()
                .map(|e| {
                    let mut set = members(&e.interval);
                    set.sort_unstable();
                    DeficientFlat { rank: e.rank, set }
                })
                .collect();
            want.sort();
            let mut got = deficient_flats(&f).map_err(|e| e.to_string())?.entries;
            got.sort();
            check(got == want, || format!("{p}: flats {got:?}"))
        })?;
        total += perms.len();
    }
    let flats = deficient_flats(&fam(7, 3, &[(1, 1, 2), (2, 1, 5), (2, 5, 5)]))
        .map_err(|e| e.to_string())?;
    check(
        flats.entries.contains(&DeficientFlat {
            rank: 1,
            set: vec![1, 2, 5],
        }),
        || "flat {1,2,5} missing".into(),
    )?;
    Ok(format!(
        "{total} rank-2 permutations, rank-3 flat {{1,2,5}} present"
    ))
}

fn c13() -> Outcome {
    let points = [
        (0, 0),
        (1, 0),
        (2, 0),
        (3, 0),
        (3, 1),
        (3, 1),
        (3, 2),
        (1, 2),
    ];
    let m = RationalMatrix::from_integers(&[
        points.iter().map(|_| 1).collect(),
        points.iter().map(|p| p.0).collect(),
        points.iter().map(|p| p.1).collect(),
    ])
    .map_err(|e| e.to_string())?;
    check(is_positively_realizing(&m), || "negative minor".into())?;
    let p = permutation_from_matrix(&m).map_err(|e| e.to_string())?;
    check(p == example(), || format!("got {p}"))?;
    Ok(format!("{p}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("essential family of the 8-element example", c1),
        ("parallel connection family, excesses and core", c2),
        ("retrieval and trace replay", c3),
        ("connected entries and core of the overlap family", c4),
        ("codimension of the example and of uniform positroids", c5),
        ("codimension-one boundary count", c6),
        ("exhaustive round trip, n <= 7", c7),
        ("rank formula equivalence", c8),
        ("codimension equivalence, n <= 7", c9),
        ("bases and lattice points, n <= 8", c10),
        ("core minimality, n <= 6", c11),
        ("rank-2 deficient flats, n <= 8", c12),
        ("realization of the point-line configuration", c13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
