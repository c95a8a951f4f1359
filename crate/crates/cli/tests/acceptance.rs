//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::gcd;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rayon::prelude::*;
use serde_json::Value;

use seaweed_core::enumerate::{compositions, specs_with_ambient_at_most};
use seaweed_core::formulas::{
    frobenius_census, frobenius_d_aab, frobenius_threeblock, index_bc_threeblock, index_d_aab,
    index_d_threeblock, spec_d_aab, ThreeBlockParams,
};
use seaweed_core::meander::{self, build};
use seaweed_core::oracle::oracle_index;
use seaweed_core::reduction::{alpha_step, index_value, state_value};
use seaweed_core::render::{render, Format};
use seaweed_core::{AlgebraType, Composition, ReductionState, SeaweedSpec};

type Outcome = Result<String, String>;

fn spec(s: &str) -> SeaweedSpec {
    s.parse().unwrap()
}

fn reduced(s: &SeaweedSpec) -> u64 {
    u64::try_from(index_value(s).unwrap_or_else(|e| panic!("{s}: {e}"))).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the binary, returning stdout and wall time.
fn run_cli(args: &[&str]) -> (String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_seaweed"))
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    (String::from_utf8(out.stdout).unwrap(), elapsed)
}

fn trace_records(out: &str) -> (String, Vec<Value>) {
    let mut lines = out.lines();
    let value = lines.next().unwrap().to_string();
    let records = lines.map(|l| serde_json::from_str(l).unwrap()).collect();
    (value, records)
}

fn state_of(v: &Value) -> (u64, Vec<u64>) {
    let n = v["n"].as_u64().unwrap();
    let blocks = v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_u64().unwrap())
        .collect();
    (n, blocks)
}

fn c1_worked_example_c() -> Outcome {
    let (out, took) = run_cli(&["index", "C:200:15,185|17,61,117", "--trace"]);
    let (value, records) = trace_records(&out);
    ensure(value == "0", || format!("index {value}"))?;
    let chain: Vec<(u64, Vec<u64>)> = records
        .iter()
        .filter_map(|r| r.get("after").map(state_of))
        .collect();
    let heads: Vec<u64> = chain.iter().map(|(n, _)| *n).collect();
    ensure(heads == [400, 385, 369, 185, 69, 9], || {
        format!("chain {heads:?}")
    })?;
    ensure(chain[0].1 == [185, 15, 17, 61, 117], || {
        format!("first state {:?}", chain[0])
    })?;
    ensure(chain[5].1 == [1, 1, 1, 1], || {
        format!("last state {:?}", chain[5])
    })?;
    ensure(took < Duration::from_millis(100), || {
        format!("took {took:?}")
    })?;
    Ok(format!(
        "index 0, chain 400→385→369→185→69→9, {:.1} ms",
        took.as_secs_f64() * 1e3
    ))
}

fn c2_worked_example_d() -> Outcome {
    let (out, took) = run_cli(&["index", "D:335:218,15,102|33,301", "--trace"]);
    let (value, records) = trace_records(&out);
    ensure(value == "3", || format!("index {value}"))?;
    let last = records.last().unwrap();
    let (n, blocks) = state_of(&last["state"]);
    ensure(last["state"]["mode"] == "psi", || {
        format!("terminal {last}")
    })?;
    ensure((n, blocks.as_slice()) == (2, &[2][..]), || {
        format!("terminal state {n} {blocks:?}")
    })?;
    ensure(last["value"] == 0, || {
        format!("terminal value {}", last["value"])
    })?;
    let psi_22 = meander::psi_a(&spec("A:2:2|2")).unwrap();
    ensure(psi_22 == 0, || format!("Ψ(2|2) by meander is {psi_22}"))?;
    ensure(took < Duration::from_millis(100), || {
        format!("took {took:?}")
    })?;
    Ok(format!(
        "index 3, terminal Ψ(2|2) = 0, {:.1} ms",
        took.as_secs_f64() * 1e3
    ))
}

fn c3_xi_family() -> Outcome {
    for n in 2..=200u64 {
        let s = spec(&format!("D:{n}:{n}|{}", n - 1));
        let v = reduced(&s);
        ensure(v == n.abs_diff(2), || format!("{s}: {v}"))?;
        if n <= 30 {
            let m = meander::index(&s).unwrap();
            ensure(m == v, || format!("{s}: meander {m}"))?;
        }
    }
    Ok("D:n:n|n-1 = |n-2| for 2 ≤ n ≤ 200 (meander too for n ≤ 30)".into())
}

fn c4_two_plus_one() -> Outcome {
    let mut count = 0;
    for n in 3..=32u64 {
        for a in 1..=n - 2 {
            let s = SeaweedSpec::new(AlgebraType::D, n, [a, n - a - 1], [n]).unwrap();
            let p = ThreeBlockParams::new(a, n - a - 1, n, n).unwrap();
            let f = index_d_threeblock(&p).unwrap();
            let v = reduced(&s);
            let expected = gcd(a, n).abs_diff(2);
            ensure(v == expected && f == expected, || {
                format!("{s}: reduce {v}, formula {f}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs, reduction = formula = |(a∧n) − 2|"))
}

fn c5_oracle_sweep() -> Outcome {
    let start = Instant::now();
    let all = specs_with_ambient_at_most(10).unwrap();
    let bad: Vec<String> = all
        .par_iter()
        .filter_map(|s| {
            let o = oracle_index(s, 3, 0).unwrap().index as u64;
            let m = meander::index(s).unwrap();
            let r = reduced(s);
            (o != m || m != r).then(|| format!("{s}: oracle {o}, meander {m}, reduce {r}"))
        })
        .collect();
    let xi = all.iter().filter(|s| s.xi_membership().in_xi).count();
    ensure(bad.is_empty(), || {
        format!("{} mismatches, first {}", bad.len(), bad[0])
    })?;
    Ok(format!(
        "{} specs ({xi} in Ξ), 3 trials, seed 0, zero mismatches, {:.1} s",
        all.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn c6_three_block_grid() -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    for a in 1..=11u64 {
        for b in 1..=12 - a {
            for c in 1..=12u64 {
                let s = (a + b).max(c);
                for n in s..=s + 3 {
                    let p = ThreeBlockParams::new(a, b, c, n).unwrap();
                    for algebra in [AlgebraType::B, AlgebraType::C, AlgebraType::D] {
                        if algebra == AlgebraType::D && a + b == n && b == 1 {
                            // not a canonical type-D pair
                            skipped += 1;
                            continue;
                        }
                        let sp = p.spec(algebra).unwrap();
                        let f = match algebra {
                            AlgebraType::D => index_d_threeblock(&p).unwrap(),
                            _ => index_bc_threeblock(&p),
                        };
                        let r = reduced(&sp);
                        let m = meander::index(&sp).unwrap();
                        ensure(f == r && r == m, || {
                            format!("{sp}: formula {f}, reduce {r}, meander {m}")
                        })?;
                        let v = frobenius_threeblock(&p, algebra).unwrap();
                        ensure(v.is_frobenius == (f == 0), || {
                            format!("{sp}: verdict {v:?}, index {f}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{checked} (spec, type) cells, {skipped} non-canonical D cells skipped"
    ))
}

/// Frobenius Ξ pairs of so(2m), counted by reduction.
fn xi_frobenius_by_reduction(m: usize) -> usize {
    if m < 2 {
        return 0;
    }
    let to = |c: &[usize]| Composition::new(c.iter().map(|&x| BigUint::from(x)));
    let full: Vec<Vec<usize>> = compositions(m)
        .into_iter()
        .filter(|c| *c.last().unwrap() > 1)
        .collect();
    let short = compositions(m - 1);
    full.par_iter()
        .map(|f| {
            short
                .iter()
                .map(|s| {
                    let x = SeaweedSpec::new(AlgebraType::D, m as u64, to(f), to(s)).unwrap();
                    let y = SeaweedSpec::new(AlgebraType::D, m as u64, to(s), to(f)).unwrap();
                    usize::from(reduced(&x) == 0) + usize::from(reduced(&y) == 0)
                })
                .sum::<usize>()
        })
        .sum()
}

fn c7_census() -> Outcome {
    let even = frobenius_census(5, false).unwrap();
    let odd = frobenius_census(4, true).unwrap();
    ensure(even.all_ok() && odd.all_ok(), || {
        "doubling map check failed".into()
    })?;
    let mut counts = Vec::new();
    for row in &even.rows {
        let n = row.n;
        ensure(row.fd_even.len() == 2 * row.fa.len(), || {
            format!("n={n}: {} vs {}", row.fd_even.len(), row.fa.len())
        })?;
        for d in &row.fd_even {
            ensure(reduced(&spec(d)) == 0, || format!("{d} is not index 0"))?;
        }
        let independent = xi_frobenius_by_reduction(2 * n);
        ensure(independent == row.fd_even.len(), || {
            format!("n={n}: reduction counts {independent}")
        })?;
        counts.push(format!("{}:{}", row.fa.len(), row.fd_even.len()));
    }
    for row in &odd.rows {
        let odd_members = row.fd_odd.as_ref().unwrap();
        ensure(odd_members.is_empty(), || {
            format!("so({}) has {odd_members:?}", 4 * row.n + 2)
        })?;
        let independent = xi_frobenius_by_reduction(2 * row.n + 1);
        ensure(independent == 0, || {
            format!("so({}): reduction finds {independent}", 4 * row.n + 2)
        })?;
    }
    Ok(format!(
        "#F^A:#F^D = {} for n = 1..5, odd rows empty for n ≤ 4",
        counts.join(", ")
    ))
}

fn c8_phi_grid() -> Outcome {
    let mut frobenius = 0;
    for a in 1..=8 {
        for b in 1..=8 {
            for m in 1..=6 {
                let s = spec_d_aab(a, b, m).unwrap();
                let f = index_d_aab(a, b, m).unwrap();
                let r = reduced(&s);
                ensure(f == r, || format!("{s}: formula {f}, reduce {r}"))?;
                let v = frobenius_d_aab(a, b, m).is_some();
                ensure(v == (r == 0), || format!("{s}: criterion {v}, index {r}"))?;
                frobenius += usize::from(v);
            }
        }
    }
    Ok(format!("384 cells, {frobenius} Frobenius"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn fit(raw: Vec<u64>, bound: u64) -> Vec<u64> {
    let mut acc = 0;
    raw.into_iter()
        .take_while(|&x| {
            acc += x;
            acc <= bound
        })
        .collect()
}

fn exact(raw: Vec<u64>, n: u64) -> Vec<u64> {
    let mut v = fit(raw, n);
    let rest = n - v.iter().sum::<u64>();
    if rest > 0 {
        v.push(rest);
    }
    v
}

fn chi(algebra: AlgebraType, n: u64, a: &[u64], b: &[u64]) -> u64 {
    reduced(
        &SeaweedSpec::new(
            algebra,
            n,
            Composition::from_u64s(a),
            Composition::from_u64s(b),
        )
        .unwrap(),
    )
}

fn unfold(a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let ta: u64 = a.iter().sum();
    let mut bottom: Vec<u64> = a.iter().rev().copied().collect();
    bottom.extend(b);
    (if ta == 0 { vec![] } else { vec![2 * ta] }, bottom)
}

fn c9_properties() -> Outcome {
    let blocks = || prop::collection::vec(1..=12u64, 0..=8);
    let pair = || (1..=50u64, blocks(), blocks()).prop_map(|(n, a, b)| (n, fit(a, n), fit(b, n)));
    let classical = || {
        prop_oneof![
            Just(AlgebraType::B),
            Just(AlgebraType::C),
            Just(AlgebraType::D)
        ]
    };
    let mut done = Vec::new();
    let mut check = |name: &str, cases: u32, r: Result<(), String>| {
        r.map_err(|e| format!("{name}: {e}"))?;
        done.push(format!("{name}×{cases}"));
        Ok::<(), String>(())
    };
    check(
        "swap",
        256,
        runner(256)
            .run(&(classical(), pair()), |(t, (n, a, b))| {
                prop_assert_eq!(chi(t, n, &a, &b), chi(t, n, &b, &a));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    check(
        "rank padding",
        256,
        runner(256)
            .run(&pair(), |(n, a, b)| {
                let m = a.iter().sum::<u64>().max(b.iter().sum()).max(1);
                prop_assert_eq!(
                    chi(AlgebraType::C, n, &a, &b),
                    chi(AlgebraType::C, m, &a, &b) + n - m
                );
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    check(
        "unfold A",
        256,
        runner(256)
            .run(&(1..=50u64, blocks(), blocks()), |(n, a, b)| {
                let (a, b) = (exact(a, n), exact(b, n));
                let (top, bottom) = unfold(&a, &b);
                prop_assert_eq!(
                    chi(AlgebraType::A, n, &a, &b),
                    chi(AlgebraType::A, 2 * n, &top, &bottom)
                );
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    for t in [AlgebraType::C, AlgebraType::D] {
        let name = if t == AlgebraType::C {
            "unfold C"
        } else {
            "unfold D"
        };
        check(
            name,
            256,
            runner(256)
                .run(&pair(), |(n, a, b)| {
                    let s = SeaweedSpec::new(
                        t,
                        n,
                        Composition::from_u64s(&a),
                        Composition::from_u64s(&b),
                    )
                    .unwrap();
                    let (a, b) = (s.top().to_u64s().unwrap(), s.bottom().to_u64s().unwrap());
                    let (a, b) = if a.iter().sum::<u64>() >= b.iter().sum() {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let (top, bottom) = unfold(&a, &b);
                    prop_assert_eq!(
                        reduced(&s),
                        chi(t, n + a.iter().sum::<u64>(), &top, &bottom)
                    );
                    Ok(())
                })
                .map_err(|e| e.to_string()),
        )?;
    }
    let parabolic = (1..=40u64)
        .prop_flat_map(|n| (Just(n), 0..n, prop::collection::vec(1..=10u64, 0..=6)))
        .prop_map(|(n, free, raw)| (n, exact(raw, n - free)));
    check(
        "α-step",
        100,
        runner(100)
            .run(
                &(parabolic, any::<prop::sample::Index>(), -6i64..=6),
                |((n, a), i, alpha)| {
                    let i = 1 + i.index(a.len());
                    let st = ReductionState::parabolic_c(n, n, &a).unwrap();
                    let d = i64::try_from(st.imbalances()[i - 1].clone()).unwrap().abs();
                    if d == 0 {
                        return Ok(());
                    }
                    let alpha = alpha.max(-(a[i - 1] as i64 / d));
                    let moved = alpha_step(&st, i, &alpha.into()).unwrap();
                    prop_assert_eq!(state_value(&st).unwrap(), state_value(&moved).unwrap());
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;
    check(
        "4ts padding",
        256,
        runner(256)
            .run(
                &(1..=30u64, prop::collection::vec(1..=10u64, 0..=6), 0..=3u64),
                |(n, a, t)| {
                    let a = fit(a, n);
                    let s = n - a.iter().sum::<u64>();
                    let m = n + 4 * t * s;
                    let pad = vec![2 * s; t as usize];
                    let padded: Vec<u64> = pad.iter().chain(&a).chain(&pad).copied().collect();
                    prop_assert_eq!(
                        chi(AlgebraType::C, m, &[m], &padded),
                        chi(AlgebraType::C, n, &[n], &a)
                    );
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;
    let gap_case = (1..=50u64)
        .prop_flat_map(|n| (Just(n), n / 2..=n))
        .prop_flat_map(|(n, s)| {
            (
                Just(n),
                Just(s),
                prop::collection::vec(1..=25u64, 0..=3),
                prop::collection::vec(1..=25u64, 0..=3),
            )
        });
    check(
        "gap",
        256,
        runner(256)
            .run(&gap_case, |(n, s, a, b)| {
                let (a, b) = (exact(a, n), exact(b, n - s));
                if a.len() + b.len() < s as usize {
                    prop_assert!(chi(AlgebraType::C, n, &a, &b) > 0);
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    check(
        "Ψ relation",
        256,
        runner(256)
            .run(
                &(1..=40u64, blocks(), blocks(), 1..=8u64),
                |(n, a, b, gap)| {
                    let a = exact(a, n);
                    let b = exact(b, n.saturating_sub(gap));
                    let s = n - b.iter().sum::<u64>();
                    let mut bs = b.clone();
                    if s > 0 {
                        bs.push(s);
                    }
                    let ca = chi(AlgebraType::A, n, &a, &bs);
                    let cc = chi(AlgebraType::C, n, &a, &b);
                    if ca == 1 && s > 0 {
                        prop_assert_eq!(cc, if s % 2 == 0 { s / 2 - 1 } else { s / 2 });
                    }
                    if cc == 0 {
                        prop_assert_eq!(ca, (s + 1) / 2);
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;
    Ok(done.join(", "))
}

/// `(class, lo, hi)` triples read off the rendered SVG.
fn svg_arcs(svg: &str) -> BTreeSet<(String, usize, usize)> {
    svg.lines()
        .filter_map(|l| {
            let class = l.split("class=\"").nth(1)?.split('"').next()?;
            let arc = l.split("data-arc=\"").nth(1)?.split('"').next()?;
            let mut it = arc.split(' ').map(|x| x.parse::<usize>().unwrap());
            Some((class.to_string(), it.next()?, it.next()?))
        })
        .collect()
}

fn c10_figures() -> Outcome {
    let up = |v: &[(usize, usize)]| {
        v.iter()
            .map(|&(a, b)| ("upper".to_string(), a, b))
            .collect::<Vec<_>>()
    };
    let low = |v: &[(usize, usize)]| {
        v.iter()
            .map(|&(a, b)| ("lower".to_string(), a, b))
            .collect::<Vec<_>>()
    };
    let crossed = |class: &str, v: &[(usize, usize)]| {
        v.iter()
            .map(|&(a, b)| (format!("{class} crossed"), a, b))
            .collect::<Vec<_>>()
    };
    let figures: [(&str, Vec<(String, usize, usize)>); 4] = [
        (
            "A:9:2,4,3|5,2,2",
            [
                up(&[(1, 5), (2, 4), (6, 7), (8, 9)]),
                low(&[(1, 2), (3, 6), (4, 5), (7, 9)]),
            ]
            .concat(),
        ),
        (
            "C:5:2,3|3,1",
            [
                up(&[(1, 3), (5, 6), (8, 10)]),
                low(&[(1, 2), (3, 5), (6, 8), (9, 10)]),
            ]
            .concat(),
        ),
        (
            "D:10:1,6,3|3,2,4",
            [
                up(&[
                    (1, 3),
                    (4, 5),
                    (6, 10),
                    (7, 9),
                    (11, 15),
                    (12, 14),
                    (16, 17),
                    (18, 20),
                ]),
                low(&[(2, 7), (3, 6), (4, 5), (14, 19), (15, 18), (16, 17)]),
                crossed("lower", &[(8, 11), (10, 13)]),
            ]
            .concat(),
        ),
        (
            "D:5:4|5",
            [
                up(&[(2, 4), (7, 9)]),
                crossed("upper", &[(1, 6), (5, 10)]),
                low(&[(1, 5), (2, 4), (6, 10), (7, 9)]),
            ]
            .concat(),
        ),
    ];
    for (s, expected) in figures {
        let m = build(&spec(s)).unwrap();
        let svg = render(&m, Format::Svg { unit: 40 }, 1000).unwrap();
        let got = svg_arcs(&svg);
        let want: BTreeSet<_> = expected.into_iter().collect();
        ensure(got == want, || format!("{s}: arcs {got:?}"))?;
        let (a, _) = run_cli(&["render", s, "--format", "svg"]);
        let (b, _) = run_cli(&["render", s, "--format", "svg"]);
        ensure(a == b && a == svg, || {
            format!("{s}: output not byte-stable")
        })?;
    }
    Ok("four figures match their arc lists, byte-stable across runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("worked example, type C", c1_worked_example_c),
        ("worked example, type D", c2_worked_example_d),
        ("D:n:n|n-1 family", c3_xi_family),
        ("D:n:a,n-a-1|n family", c4_two_plus_one),
        ("oracle sweep, ambient ≤ 10", c5_oracle_sweep),
        ("three-block grids", c6_three_block_grid),
        ("Frobenius census", c7_census),
        ("φ_m family", c8_phi_grid),
        ("property suites", c9_properties),
        ("meander figures", c10_figures),
    ];
    let quiet = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    std::panic::set_hook(quiet);
    if failed > 0 {
        std::process::exit(1);
    }
}
