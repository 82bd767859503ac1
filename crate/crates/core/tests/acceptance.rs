//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails.

use std::time::Instant;

use k3count::assembler::{deligne_window, DeligneWindow};
use k3count::brauer::brauer_report;
use k3count::counters::{pin_sign, resolved_count, CoefficientBackend, ModPBackend};
use k3count::fixtures;
use k3count::lattice::{run_trials, TrialConfig};
use k3count::modarith::PrimeIter;
use k3count::s5_mode::{algebraic_trace, rm_point_count};
use k3count::two_adic::{init_direct, init_efficient, TraceTable};
use k3count::{count_range, Execution, NaiveBackend, RangeEntry, SixLineSurface};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn efficient_table(s: &SixLineSurface) -> Result<TraceTable, String> {
    init_efficient(s, Execution::default())
        .map(|e| e.table)
        .map_err(|e| format!("{}: {e}", s.name))
}

fn good_primes(s: &SixLineSurface, below: u64) -> Vec<u64> {
    let inv = s.bad_primes();
    PrimeIter::new(3, below - 1).filter(|&p| inv.is_good_prime(p)).collect()
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for s in fixtures::six_line_surfaces() {
        let table = efficient_table(&s)?;
        for e in count_range(&s, Some(&table), 3, 999, &NaiveBackend, Execution::default()) {
            match e {
                RangeEntry::Counted(c) => {
                    let naive = resolved_count(&s, c.p).map_err(|e| e.to_string())?;
                    ensure(c.count == naive, || {
                        format!("{} p = {}: pipeline {} naive {naive}", s.name, c.p, c.count)
                    })?;
                    checked += 1;
                }
                RangeEntry::Skipped { p } => {
                    ensure(!s.bad_primes().is_good_prime(p), || format!("{} skipped good p = {p}", s.name))?
                }
                RangeEntry::Failed { p, error } => return Err(format!("{} p = {p}: {error}", s.name)),
            }
        }
    }
    Ok(format!("{checked} counts agree"))
}

fn criterion_2() -> Outcome {
    let d = init_direct(&fixtures::s1(), Execution::default()).map_err(|e| e.to_string())?;
    ensure(d.witnesses.len() == 256, || format!("{} witnesses", d.witnesses.len()))?;
    ensure(d.largest_prime() == 21121, || format!("largest prime {}", d.largest_prime()))?;
    Ok("256 witnesses, largest 21121".into())
}

fn criterion_3() -> Outcome {
    let e = init_efficient(&fixtures::s1(), Execution::default()).map_err(|e| e.to_string())?;
    ensure(e.unknowns == 92, || format!("{} unknowns", e.unknowns))?;
    ensure(e.largest_prime <= 1000, || format!("largest prime {}", e.largest_prime))?;
    for s in fixtures::six_line_surfaces() {
        let d = init_direct(&s, Execution::default()).map_err(|e| e.to_string())?;
        let t = efficient_table(&s)?;
        ensure(d.table == t, || format!("{}: direct and efficient tables differ", s.name))?;
    }
    Ok(format!("92 unknowns, largest prime {}", e.largest_prime))
}

fn criterion_4() -> Outcome {
    let mut s3 = [0u32; 16];
    s3[1] = 20;
    s3[5] = 28;
    s3[9] = 4;
    s3[13] = 12;
    let mut s4 = [0u32; 16];
    s4[0] = 8;
    s4[2] = 2;
    s4[6] = 4;
    s4[10] = 2;
    let expected: [([u32; 16], u32); 4] = [
        ([46, 0, 44, 0, 32, 0, 26, 0, 18, 0, 36, 0, 32, 0, 22, 0], 256),
        ([0, 0, 7, 0, 0, 0, 7, 0, 0, 0, 9, 0, 0, 0, 9, 0], 32),
        (s3, 64),
        (s4, 16),
    ];
    for (s, (row, sum)) in fixtures::six_line_surfaces().iter().zip(expected) {
        let h = efficient_table(s)?.histogram();
        ensure(h == row, || format!("{}: histogram {h:?}", s.name))?;
        ensure(h.iter().sum::<u32>() == sum, || format!("{}: row sum", s.name))?;
    }
    Ok("four rows match".into())
}

fn criterion_5() -> Outcome {
    let expected: [&[u64]; 5] = [&[3, 5, 7, 11, 13, 29], &[3, 5, 7], &[3, 5, 7, 11], &[3, 5], &[5]];
    for (s, want) in fixtures::all().iter().zip(expected) {
        let got = s.bad_primes().odd_bad_primes;
        ensure(got == want, || format!("{}: {got:?}", s.name))?;
        ensure(!s.bad_primes().is_good_prime(2), || format!("{}: 2 is good", s.name))?;
    }
    Ok("five sets match".into())
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for s in fixtures::all() {
        let epsilon = pin_sign(&s).map_err(|e| format!("{}: {e}", s.name))?;
        let backend = CoefficientBackend { epsilon };
        let primes = good_primes(&s, 300);
        let results = Execution::default().map(&primes, |&p| {
            let c = backend.count_mod_p(&s, p).map_err(|e| e.to_string())?;
            let n = resolved_count(&s, p).map_err(|e| e.to_string())?;
            Ok::<_, String>((c, n % p))
        });
        for (p, r) in primes.iter().zip(results) {
            let (c, n) = r?;
            ensure(c == n, || format!("{} p = {p}: coefficient {c}, naive {n}", s.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} residues agree"))
}

fn s5_counts() -> Result<Vec<(u64, u64)>, String> {
    let s5 = fixtures::s5();
    let primes = good_primes(&s5, 500);
    let backend = CoefficientBackend::default();
    Execution::default()
        .map(&primes, |&p| rm_point_count(&s5, p, &backend).map(|c| (p, c.count)))
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())
}

fn criterion_7() -> Outcome {
    let s5 = fixtures::s5();
    let counts = s5_counts()?;
    let mut classes = [false; 5];
    for &(p, c) in &counts {
        let n = resolved_count(&s5, p).map_err(|e| e.to_string())?;
        ensure(c == n, || format!("p = {p}: rm_count {c}, naive {n}"))?;
        classes[(p % 5) as usize] = true;
    }
    ensure(classes[1..].iter().all(|&b| b), || "some residue class mod 5 missing".into())?;
    for (p, want) in [(3u64, 16u64), (7, 64), (13, 196)] {
        let n = resolved_count(&s5, p).map_err(|e| e.to_string())?;
        let c = rm_point_count(&s5, p, &CoefficientBackend::default())
            .map_err(|e| e.to_string())?
            .count;
        ensure(n == want && c == want, || format!("p = {p}: naive {n}, rm {c}, want {want}"))?;
    }
    Ok(format!("{} primes, closed forms 16/64/196", counts.len()))
}

fn criterion_8() -> Outcome {
    let cfg = TrialConfig::default();
    ensure(cfg.k == 12 && cfg.dims == (2, 8), || "default configuration changed".into())?;
    let r = run_trials(&cfg);
    ensure(r.trials == 1000, || format!("only {} trials qualified", r.trials))?;
    ensure(r.checks.len() == 12, || format!("{} checks", r.checks.len()))?;
    ensure(r.failure_count() == 0, || format!("{} failures: {:?}", r.failure_count(), r.failures.first()))?;
    Ok(format!("1000 trials, {} rejected attempts, 0 failures", r.rejections))
}

fn criterion_9() -> Outcome {
    let r = brauer_report().map_err(|e| e.to_string())?;
    ensure(r.even_dim == 11, || format!("dim M = {}", r.even_dim))?;
    ensure(r.quotient_dim == 6, || format!("quotient dim {}", r.quotient_dim))?;
    ensure(r.sym6_orbit == 12 && r.sym6_stabilizer == 60, || {
        format!("Sym(6) orbit {} stabilizer {}", r.sym6_orbit, r.sym6_stabilizer)
    })?;
    ensure(r.alt6_orbit == 6 && r.alt6_orbit_rank == 6, || {
        format!("Alt(6) orbit {} rank {}", r.alt6_orbit, r.alt6_orbit_rank)
    })?;
    ensure(r.outer.is_outer && r.outer.transposition_image_type == [2, 2, 2], || {
        "sigma -> sigma~ is not certified outer".into()
    })?;
    ensure(r.s5.g4_order == Some(4), || format!("order(G4) = {:?}", r.s5.g4_order))?;
    ensure(r.s5.square_matches, || {
        format!(
            "G4^2 differs from the printed involution (conjugate: {})",
            r.s5.square_conjugate
        )
    })?;
    Ok("structure confirmed".into())
}

fn criterion_10() -> Outcome {
    for (s, law) in fixtures::six_line_surfaces().iter().zip([None, Some(2u8), Some(1u8), None]) {
        let table = efficient_table(s)?;
        if let Some(r) = law {
            ensure(table.entries.iter().all(|&t| t % 4 == r), || {
                format!("{}: entry not {r} mod 4", s.name)
            })?;
        }
    }
    let mut emitted = 0;
    let mut check = |s: &SixLineSurface, p: u64, count: u64| -> Result<(), String> {
        // Pic of S_5 carries a nontrivial Galois action; centre on its trace
        let w = if s.is_rm() {
            let pi = p as i64;
            DeligneWindow {
                center: pi * pi + algebraic_trace((p % 5) as u8) * pi + 1,
                halfwidth: (22 - s.picard_rank as i64) * pi,
            }
        } else {
            deligne_window(s.picard_rank, p)
        };
        ensure(w.contains(count as i64), || format!("{} p = {p}: {count} outside window", s.name))?;
        ensure(count.is_multiple_of(2), || format!("{} p = {p}: resolved count {count} odd", s.name))?;
        let fixed = s.frobenius_line_permutation(p).fixed_pair_count() as u64;
        let double_plane = count - p * fixed;
        ensure(double_plane % 2 == 1, || {
            format!("{} p = {p}: double-plane count {double_plane} even", s.name)
        })?;
        emitted += 1;
        Ok(())
    };
    for s in fixtures::six_line_surfaces() {
        let table = efficient_table(&s)?;
        for e in count_range(&s, Some(&table), 3, 999, &NaiveBackend, Execution::default()) {
            if let RangeEntry::Counted(c) = e {
                check(&s, c.p, c.count)?;
            }
        }
    }
    let s5 = fixtures::s5();
    for (p, c) in s5_counts()? {
        check(&s5, p, c)?;
    }
    Ok(format!("{emitted} counts in window, double-plane counts odd"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle sweep p < 1000", criterion_1),
        ("direct initialization witnesses", criterion_2),
        ("efficient initialization", criterion_3),
        ("trace histograms", criterion_4),
        ("bad primes", criterion_5),
        ("coefficient backend p < 300", criterion_6),
        ("real multiplication p < 500", criterion_7),
        ("lattice campaign", criterion_8),
        ("Brauer structure", criterion_9),
        ("residue laws and windows", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
