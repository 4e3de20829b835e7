//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use srtor::cli::run;
use srtor::gkm::GkmData;
use srtor::gysin::GysinData;
use srtor::koszul_tor::{regular_sequence_check, Verdict};
use srtor::simplicial::{check_connected_kernel, check_local_freeness, LocalFreeness};
use srtor::stanley_reisner::{in_linear_ideal, parse_polynomial, quotient_piece};
use srtor::{Face, KoszulComplex, LinearForm, SimplicialComplex, SubgroupData, ZModule};

use common::*;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z(rank: usize, torsion: &[i64]) -> ZModule {
    ZModule::new(rank, torsion.iter().map(|&d| BigInt::from(d)).collect()).unwrap()
}

fn cli(args: &[&str]) -> srtor::cli::Outcome {
    let mut argv = vec!["srtor".to_string()];
    for a in args {
        argv.push(a.replace("@", &corpus_path("").display().to_string()));
    }
    run(argv)
}

/// Checks the Tor table against `expected_tor0(j)` and zero for `p >= 1`.
fn check_tor0_pattern(
    name: &str,
    d: u32,
    expected_tor0: impl Fn(u32) -> ZModule,
    budget: Duration,
) -> Check {
    let spec = load(name);
    let start = Instant::now();
    let kc = KoszulComplex::new(&spec.complex, spec.b.as_ref().unwrap(), d)
        .map_err(|e| e.to_string())?;
    let table = kc.tor_table().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for j in (0..=d).step_by(2) {
        let want = expected_tor0(j);
        ensure(table.get(0, j) == want, || {
            format!("Tor_(0,{j}) = {} but expected {want}", table.get(0, j))
        })?;
        let q = quotient_piece(&spec.complex, &spec.b.as_ref().unwrap().linear_forms(), j)
            .map_err(|e| e.to_string())?;
        ensure(q == want, || {
            format!("quotient piece at j={j} is {q}, expected {want}")
        })?;
        for p in 1..=table.n() {
            ensure(table.get(p, j).is_zero(), || {
                format!("Tor_({p},{j}) = {} should vanish", table.get(p, j))
            })?;
        }
        let euler: i64 = (0..=table.n())
            .map(|p| {
                let r = table.get(p, j).rank() as i64;
                if p % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum();
        let oracle = euler_oracle(&spec.complex, table.n(), j);
        ensure(euler == oracle, || {
            format!("Euler characteristic {euler} != {oracle} at j={j}")
        })?;
    }
    ensure(elapsed < budget, || {
        format!("took {elapsed:?}, budget {budget:?}")
    })
}

fn criterion_1() -> Check {
    check_tor0_pattern(
        "wps12.tcx",
        20,
        |j| if j <= 2 { z(1, &[]) } else { z(0, &[2]) },
        Duration::from_secs(5),
    )
}

fn criterion_2() -> Check {
    check_tor0_pattern(
        "wps123.tcx",
        16,
        |j| if j <= 4 { z(1, &[]) } else { z(0, &[6]) },
        Duration::from_secs(60),
    )
}

fn criterion_3() -> Check {
    let spec = load("cp1xcp1.tcx");
    let kc = KoszulComplex::new(&spec.complex, spec.b.as_ref().unwrap(), 12)
        .map_err(|e| e.to_string())?;
    let table = kc.tor_table().map_err(|e| e.to_string())?;
    for j in (0..=12).step_by(2) {
        let rank = match j {
            0 | 4 => 1,
            2 => 2,
            _ => 0,
        };
        ensure(table.get(0, j) == ZModule::free(rank), || {
            format!("Tor_(0,{j}) = {}", table.get(0, j))
        })?;
        for p in 1..=2 {
            ensure(table.get(p, j).is_zero(), || {
                format!("Tor_({p},{j}) nonzero")
            })?;
        }
    }
    let v = kc.verdicts(&table).map_err(|e| e.to_string())?;
    let want = Verdict::HoldsUpTo { bound: 12 };
    for (name, got) in [
        ("bigcm", &v.bigcm),
        ("odd_vanishing", &v.odd_vanishing),
        ("free_over_R", &v.free_over_r),
    ] {
        ensure(got == &want, || format!("{name} is {}", got.label()))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let out = cli(&["check-bigcm", "--input", "@prod1212.tcx"]);
    ensure(out.code == 0, || {
        format!("exit code {}: {}", out.code, out.stderr)
    })?;
    let line = out.stdout.lines().next().unwrap_or_default();
    ensure(
        line.starts_with("bigcm: FAILS: witness at (p=1, j="),
        || format!("got `{line}`"),
    )?;
    let j: u32 = line["bigcm: FAILS: witness at (p=1, j=".len()..]
        .split(')')
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or("unparsable witness degree")?;
    ensure(j <= 10, || format!("witness degree {j} > 10"))?;
    ensure(start.elapsed() < Duration::from_secs(5), || {
        format!("took {:?}", start.elapsed())
    })?;

    // x2*x3^2 is a zero divisor modulo x1 - 2x3, checked directly in Z[K].
    let k = square();
    let u1 = LinearForm::parse("x1 - 2x3", 4).unwrap();
    let w = parse_polynomial("x2*x3^2", 4).unwrap();
    let uw = &parse_polynomial("2x2 - x4", 4).unwrap() * &w;
    let in_ideal = |p, j| in_linear_ideal(&k, std::slice::from_ref(&u1), p, j).unwrap();
    ensure(!in_ideal(&w, 6), || {
        "x2*x3^2 vanishes modulo x1 - 2x3".into()
    })?;
    ensure(in_ideal(&uw, 8), || {
        "(2x2 - x4)*x2*x3^2 is nonzero modulo x1 - 2x3".into()
    })?;

    // Tor_1 verdict and regular-sequence check agree on every corpus input.
    for (name, spec) in corpus() {
        let Some(b) = &spec.b else { continue };
        let kc = KoszulComplex::new(&spec.complex, b, 12).map_err(|e| e.to_string())?;
        let v = kc
            .verdicts(&kc.tor_table().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let r = regular_sequence_check(&kc).map_err(|e| e.to_string())?;
        ensure(v.bigcm.holds() == r.holds(), || {
            format!("{name}: Tor_1 and regularity disagree")
        })?;
    }
    Ok(())
}

/// Which reading of the cut forms reproduces every qualitative claim.
fn cut_forms_consistent(k1: &SimplicialComplex, k2: &SimplicialComplex, s: &SubgroupData) -> bool {
    let verdict = |k: &SimplicialComplex| {
        let kc = KoszulComplex::new(k, s, 12).unwrap();
        kc.verdicts(&kc.tor_table().unwrap()).unwrap().bigcm
    };
    let locally_free = |k: &SimplicialComplex| {
        matches!(
            check_local_freeness(k, s).verdict,
            LocalFreeness::Pass { .. }
        )
    };
    let forms = s.linear_forms();
    let w = parse_polynomial("x2*x3^2", 5).unwrap();
    let uw = &forms[1].to_polynomial() * &w;
    let zero_divisor = !in_linear_ideal(k2, &forms[..1], &w, 6).unwrap()
        && in_linear_ideal(k2, &forms[..1], &uw, 8).unwrap();
    verdict(k1).holds()
        && verdict(k2).fails()
        && locally_free(k1)
        && locally_free(k2)
        && zero_divisor
}

fn criterion_5() -> Check {
    let k1 = load("k1.tcx");
    let k2 = load("k2.tcx");
    let rows = k1.b.clone().unwrap();
    ensure(k2.b.as_ref() == Some(&rows), || {
        "k1 and k2 use different matrices".into()
    })?;
    let stated = subgroup(&[&[1, 0, -2, 1, 0], &[2, 0, 0, -1, -1]]);
    let candidates = [("matrix rows", &rows), ("stated forms", &stated)];
    let good: Vec<&str> = candidates
        .iter()
        .filter(|(_, s)| cut_forms_consistent(&k1.complex, &k2.complex, s))
        .map(|(n, _)| *n)
        .collect();
    ensure(good == ["matrix rows"], || {
        format!("consistent readings: {good:?}")
    })?;

    for (spec, expect_holds) in [(&k1, true), (&k2, false)] {
        let kc = KoszulComplex::new(&spec.complex, &rows, 12).map_err(|e| e.to_string())?;
        let v = kc
            .verdicts(&kc.tor_table().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let r = regular_sequence_check(&kc).map_err(|e| e.to_string())?;
        ensure(v.bigcm.holds() == r.holds(), || {
            "Tor_1 and regularity disagree".into()
        })?;
        if expect_holds {
            ensure(v.bigcm == Verdict::HoldsUpTo { bound: 12 }, || {
                format!("K1: {}", v.bigcm.label())
            })?;
        } else {
            ensure(v.bigcm.fails(), || format!("K2: {}", v.bigcm.label()))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let spec = load("gkm_square.tcx");
    let data = GkmData::new(&spec.complex, spec.b.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let expected = [
        "(u1, 0, 0, u1)",
        "(u2, u2, 0, 0)",
        "(0, -u1, -u1, 0)",
        "(0, 0, -u2, -u2)",
    ];
    for (i, want) in expected.iter().enumerate() {
        let x = parse_polynomial(&format!("x{}", i + 1), 4).unwrap();
        let got = data.phi(&x).to_string();
        ensure(&got == want, || {
            format!("Phi(x{}) = {got}, expected {want}", i + 1)
        })?;
    }
    let extra = spec.form("u3").ok_or("form u3 missing")?;
    let v = Face::from_vertices(4, &[1, 2]).unwrap();
    let t = data.find_torsion(extra, v).map_err(|e| e.to_string())?;
    ensure(t.g.to_text("u") == "-u2 + u3", || {
        format!("g = {}", t.g.to_text("u"))
    })?;
    ensure(t.f == parse_polynomial("x1*x2", 4).unwrap(), || {
        format!("f = {}", t.f)
    })?;
    ensure(t.verified, || "not verified".into())
}

fn criterion_7() -> Check {
    for name in ["wps12.tcx", "cp1xcp1.tcx", "prod1212.tcx"] {
        let spec = load(name);
        let g = GysinData::new(&spec.complex, spec.b.as_ref().unwrap(), None, 10)
            .map_err(|e| format!("{name}: {e}"))?;
        let report = g
            .build_and_verify_exactness()
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(report.exact && report.failing().next().is_none(), || {
            let bad: Vec<String> = report.failing().map(|n| n.term.to_string()).collect();
            format!("{name}: not exact at {bad:?}")
        })?;
        ensure(report.chain_level.failures.is_empty(), || {
            format!("{name}: chain level {:?}", report.chain_level.failures)
        })?;
        let checks = g
            .connecting_map_check()
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(checks.iter().any(|c| c.is_nonzero_node()), || {
            format!("{name}: no nonzero node")
        })?;
        for c in checks.iter().filter(|c| c.is_nonzero_node()) {
            ensure(c.agrees, || {
                format!("{name}: connecting map disagrees at i={}, j={}", c.i, c.j)
            })?;
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    for (name, spec) in corpus() {
        let Some(b) = &spec.b else { continue };
        let d = 12;
        let kc = KoszulComplex::new(&spec.complex, b, d).map_err(|e| e.to_string())?;
        let table = kc.tor_table().map_err(|e| e.to_string())?;
        let rational = kc.rational_dimensions().map_err(|e| e.to_string())?;
        for j in (0..=d).step_by(2) {
            let euler: i64 = (0..=b.n())
                .map(|p| {
                    let r = table.get(p, j).rank() as i64;
                    if p % 2 == 0 {
                        r
                    } else {
                        -r
                    }
                })
                .sum();
            let oracle = euler_oracle(&spec.complex, b.n(), j);
            ensure(euler == oracle, || {
                format!("{name}: Euler {euler} != {oracle} at j={j}")
            })?;
            let q =
                quotient_piece(&spec.complex, &b.linear_forms(), j).map_err(|e| e.to_string())?;
            ensure(q == table.get(0, j), || {
                format!("{name}: Tor_0 != quotient at j={j}")
            })?;
            for p in 0..=b.n() {
                let r = rational.get(&(p, j)).copied().unwrap_or(0);
                ensure(r == table.get(p, j).rank(), || {
                    format!("{name}: rational dim {r} != rank at ({p},{j})")
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    for (name, spec) in corpus() {
        let Some(b) = &spec.b else { continue };
        let kc = KoszulComplex::new(&spec.complex, b, 12).map_err(|e| e.to_string())?;
        let table = kc.tor_table().map_err(|e| e.to_string())?;
        let v = kc.verdicts(&table).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            v.bigcm.holds() == v.odd_vanishing.holds()
                && v.bigcm.fails() == v.odd_vanishing.fails(),
            || {
                format!(
                    "{name}: bigcm {} vs odd_vanishing {}",
                    v.bigcm.label(),
                    v.odd_vanishing.label()
                )
            },
        )?;
        let tor1_zero = (0..=12).step_by(2).all(|j| table.get(1, j).is_zero());
        if tor1_zero {
            for e in table.entries() {
                ensure(e.p == 0, || {
                    format!("{name}: Tor_1 = 0 but Tor_{} != 0 at j={}", e.p, e.j)
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    for name in ["wps12.tcx", "wps123.tcx", "prod1212.tcx"] {
        let out = cli(&["check-local-free", "--input", &format!("@{name}")]);
        ensure(out.code == 0 && out.stdout.starts_with("PASS"), || {
            format!("{name}: {}{}", out.stdout, out.stderr)
        })?;
    }
    let deficient = subgroup(&[&[1, 1, 1, 0], &[0, 0, 1, 1]]);
    let r = check_local_freeness(&square(), &deficient);
    ensure(matches!(r.verdict, LocalFreeness::Fail { .. }), || {
        format!("{:?}", r.verdict)
    })?;
    ensure(
        check_connected_kernel(&subgroup(&[&[1, 0, -2, 0], &[0, 2, 0, -1]])),
        || "prod1212 kernel reported disconnected".into(),
    )?;
    ensure(!check_connected_kernel(&subgroup(&[&[2, 4]])), || {
        "[2 4] reported connected".into()
    })
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("weighted projective line (1,2)", criterion_1),
        ("weighted projective plane (1,2,3)", criterion_2),
        ("smooth CP1 x CP1", criterion_3),
        (
            "product of weighted lines: Tor_1 witness and zero divisor",
            criterion_4,
        ),
        ("symplectic cut pair K1, K2", criterion_5),
        ("GKM restrictions and torsion element", criterion_6),
        ("Gysin exactness and connecting map", criterion_7),
        (
            "Euler characteristic, Tor_0 and rational oracles",
            criterion_8,
        ),
        ("verdict consistency", criterion_9),
        ("local freeness and connectedness", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS criterion {}: {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
