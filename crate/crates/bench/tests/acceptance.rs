//! Acceptance suite. Prints one `[PASS]`, `[FAIL]` or `[N/A]` line per
//! criterion and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use bigfft::oracle::{even_odd_scatter, l2_norm, naive_dft, naive_dft_at, pack_perm, ulp_distance};
use bigfft::recombine::{reassemble_pair_basic, reassemble_pair_inplace};
use bigfft::scatter::{build_scatter_index, scatter};
use bigfft::{LeafDft, PermSpectrum, RealLeafKernel, TransformHandle, TransformPlan};
use bigfft_bench::commands::{cmd_scan, measure, RunConfig, ScanConfig};
use bigfft_bench::signal_io::random_signal;
use bigfft_bench::CSV_HEADER;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Verdict {
    Pass(String),
    Fail(String),
    NotApplicable(String),
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn cores() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn transform(x: &[f32], splits: u32, workers: usize, test_mode: bool) -> Vec<f32> {
    let plan = TransformPlan::create(x.len(), splits, workers, test_mode).unwrap();
    let mut handle = TransformHandle::new(plan).unwrap();
    handle.data_mut().copy_from_slice(x);
    handle.run_transform().unwrap();
    handle.result().to_vec()
}

fn oracle_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for p in [8u32, 10, 12, 14] {
        let n = 1usize << p;
        let mut handles: Vec<TransformHandle> = (0..=p - 2)
            .map(|s| TransformHandle::new(TransformPlan::create(n, s, cores().min(4), true).unwrap()).unwrap())
            .collect();
        for trial in 0..20 {
            let x = random_signal(n, 1000 * p as u64 + trial);
            let exact = pack_perm(&naive_dft(&x)).unwrap();
            for handle in &mut handles {
                handle.data_mut().copy_from_slice(&x);
                handle.run_transform().unwrap();
                worst = worst.max(l2_norm(handle.result(), &exact).unwrap());
                runs += 1;
            }
        }
    }
    verdict(worst <= 1e-6, format!("{runs} transforms, max L2 {worst:.3e} (limit 1e-6)"))
}

fn large_spot_checks() -> Verdict {
    let n = 1usize << 24;
    let x = random_signal(n, 24);
    let scale = x.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let indices: Vec<usize> = (0..64).map(|_| rng.gen_range(0..n)).collect();
    let exact: Vec<_> = indices
        .iter()
        .map(|&k| {
            if k <= n / 2 {
                naive_dft_at(&x, k).unwrap()
            } else {
                naive_dft_at(&x, n - k).unwrap().conj()
            }
        })
        .collect();
    let mut detail = Vec::new();
    let mut ok = true;
    for s in [2u32, 4] {
        let out = transform(&x, s, cores(), false);
        let spectrum = PermSpectrum::new(&out).unwrap();
        let worst = indices
            .iter()
            .zip(&exact)
            .map(|(&k, &e)| (spectrum.coefficient(k).unwrap() - e).norm() / scale)
            .fold(0.0f64, f64::max);
        ok &= worst <= 1e-5;
        detail.push(format!("s={s} max err {worst:.3e}"));
    }
    verdict(ok, format!("n=2^24, 64 coefficients: {} (limit 1e-5)", detail.join(", ")))
}

fn kernel_equivalence() -> Verdict {
    let mut worst = 0u32;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in [256usize, 1024, 4096] {
        for _ in 0..50 {
            let pair: Vec<f32> = (0..2 * m).map(|_| rng.gen_range(-64.0f32..64.0)).collect();
            let mut basic = vec![0.0; 2 * m];
            reassemble_pair_basic(&pair[..m], &pair[m..], &mut basic).unwrap();
            for workers in [1, 4] {
                let mut inplace = pair.clone();
                reassemble_pair_inplace(&mut inplace, 64, workers).unwrap();
                for (a, b) in inplace.iter().zip(&basic) {
                    worst = worst.max(ulp_distance(*a, *b));
                }
            }
        }
    }
    verdict(worst <= 2, format!("150 pairs, max distance {worst} ULP (limit 2)"))
}

fn determinism() -> Verdict {
    let n = 1usize << 20;
    let x = random_signal(n, 20);
    let reference = transform(&x, 3, 1, false);
    let mut mismatches = Vec::new();
    for workers in [1usize, 2, 4, 8] {
        let plan = TransformPlan::create(n, 3, workers, false).unwrap();
        let mut handle = TransformHandle::new(plan).unwrap();
        handle.data_mut().copy_from_slice(&x);
        for repeat in 0..3 {
            handle.run_transform().unwrap();
            if handle.result() != &reference[..] {
                mismatches.push(format!("T={workers} run {repeat}"));
            }
        }
    }
    if mismatches.is_empty() {
        Verdict::Pass("n=2^20, s=3, T in {1,2,4,8}, 3 runs each: bitwise identical".into())
    } else {
        Verdict::Fail(format!("differs from T=1: {}", mismatches.join(", ")))
    }
}

fn scatter_correctness() -> Verdict {
    let mut cases = 0;
    let mut failures = Vec::new();
    for p in 2u32..=16 {
        let n = 1usize << p;
        let x = random_signal(n, p as u64);
        for s in 0..=p - 2 {
            let plan = TransformPlan::create(n, s, 4, true).unwrap();
            let mut out = vec![0.0; n];
            scatter(&x, &mut out, &plan).unwrap();
            if out != even_odd_scatter(&x, s) {
                failures.push(format!("n=2^{p} s={s}"));
            }
            cases += 1;
        }
    }
    for s in 0..=10 {
        let index = build_scatter_index(s);
        if index.iter().enumerate().any(|(j, &r)| index[r] != j) {
            failures.push(format!("index s={s} not an involution"));
        }
    }
    verdict(
        failures.is_empty(),
        format!("{cases} scatters bitwise equal, involution s<=10; failures: {failures:?}"),
    )
}

fn leaf_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut parseval, mut linearity) = (0.0f64, 0.0f64);
    let sq = |v: f32| (v as f64).powi(2);
    for p in 2..=12 {
        let m = 1usize << p;
        let mut kernel = RealLeafKernel::new(m).unwrap();
        let mut run = |x: &[f32]| {
            let mut buf = x.to_vec();
            kernel.transform(&mut buf).unwrap();
            buf
        };
        for _ in 0..20 {
            let x: Vec<f32> = (0..m).map(|_| rng.gen_range(-0.5f32..=0.5)).collect();
            let y: Vec<f32> = (0..m).map(|_| rng.gen_range(-0.5f32..=0.5)).collect();
            let (a, b) = (rng.gen_range(-2.0f32..2.0), rng.gen_range(-2.0f32..2.0));

            let fx = run(&x);
            let time: f64 = x.iter().map(|&v| sq(v)).sum();
            let freq = sq(fx[0]) + sq(fx[1]) + 2.0 * fx[2..].iter().map(|&v| sq(v)).sum::<f64>();
            parseval = parseval.max((freq / m as f64 - time).abs() / time);

            let fy = run(&y);
            let mix: Vec<f32> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
            let combined: Vec<f64> = fx
                .iter()
                .zip(&fy)
                .map(|(u, v)| a as f64 * *u as f64 + b as f64 * *v as f64)
                .collect();
            linearity = linearity.max(l2_norm(&run(&mix), &combined).unwrap());
        }
    }
    verdict(
        parseval <= 1e-5 && linearity <= 1e-5,
        format!("m=4..4096: Parseval gap {parseval:.3e}, linearity L2 {linearity:.3e} (limits 1e-5)"),
    )
}

fn parallel_scaling() -> Verdict {
    let n = 1usize << 24;
    let x = random_signal(n, 7);
    let best = |workers: usize| {
        (2u32..=5)
            .map(|splits| {
                let cfg = RunConfig {
                    n,
                    splits,
                    workers,
                    test_mode: false,
                    mem: false,
                };
                measure(&cfg, &x, 2).unwrap().gflops
            })
            .fold(0.0f64, f64::max)
    };
    let (p1, p4) = (best(1), best(4));
    let ratio = p4 / p1;
    let detail = format!("P(1)={p1:.3} P(4)={p4:.3} GFLOP/s, ratio {ratio:.2} (limit 2.0)");
    if cores() < 4 {
        Verdict::NotApplicable(format!("{} core(s) available, needs 4; measured {detail}", cores()))
    } else {
        verdict(ratio >= 2.0, detail)
    }
}

fn tuning_scan() -> Verdict {
    let n = 1usize << 22;
    let cfg = ScanConfig {
        n,
        splits: vec![2, 3, 4],
        workers: vec![1, 2, 4],
        repeats: 2,
        test_mode: false,
        mem: true,
    };
    let mut out = Vec::new();
    if let Err(e) = cmd_scan(&cfg, &mut out) {
        return Verdict::Fail(format!("scan failed: {e}"));
    }
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut problems = Vec::new();
    if lines.first() != Some(&"size,splits,workers,runtime_s,gflops,l2,mem_bytes,status")
        || CSV_HEADER != "size,splits,workers,runtime_s,gflops,l2,mem_bytes,status"
    {
        problems.push("header mismatch".to_string());
    }
    if lines.len() != 11 {
        problems.push(format!("{} lines, expected 11", lines.len()));
    }
    let rows: Vec<Vec<&str>> = lines.iter().skip(1).map(|l| l.split(',').collect()).collect();
    if rows.iter().any(|r| r.len() != 8) {
        problems.push("row with wrong field count".into());
    }
    let ok_rows: Vec<&Vec<&str>> = rows.iter().filter(|r| r.last() == Some(&"ok")).collect();
    let best_rows: Vec<&Vec<&str>> = rows.iter().filter(|r| r.last() == Some(&"best")).collect();
    if ok_rows.len() != 9 || best_rows.len() != 1 {
        problems.push(format!("{} ok rows and {} best rows", ok_rows.len(), best_rows.len()));
    } else {
        let gflops = |r: &Vec<&str>| r[4].parse::<f64>().unwrap();
        let top = ok_rows
            .iter()
            .copied()
            .reduce(|a, b| if gflops(b) > gflops(a) { b } else { a })
            .unwrap();
        if top[..7] != best_rows[0][..7] {
            problems.push("best row is not the argmax".into());
        }
        if ok_rows.iter().any(|r| !r[5].is_empty() || r[6].is_empty()) {
            problems.push("l2 must be empty and mem_bytes present".into());
        }
    }
    let best = best_rows.first().map(|r| format!("s={} T={} {} GFLOP/s", r[1], r[2], r[4]));
    verdict(
        problems.is_empty(),
        format!("n=2^22 3x3 grid, best {}; problems: {problems:?}", best.unwrap_or_default()),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("large-size spot checks", large_spot_checks),
        ("kernel equivalence", kernel_equivalence),
        ("determinism", determinism),
        ("scatter correctness", scatter_correctness),
        ("leaf Parseval and linearity", leaf_invariants),
        ("parallel scaling", parallel_scaling),
        ("tuning scan", tuning_scan),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Verdict::Fail("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match v {
            Verdict::Pass(d) => ("[PASS]", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("[FAIL]", d)
            }
            Verdict::NotApplicable(d) => ("[N/A] ", d),
        };
        println!("{tag} {name}: {detail} ({secs:.1}s)");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
