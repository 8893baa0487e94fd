//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod oracles;

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shiftframe::analytic::{
    disk_zero_count, jensen_audit, rolle_trials, DiscreteMeasure, RolleTrialConfig, DEFAULT_CIRCLE_SAMPLES,
};
use shiftframe::gabor::{frame_bounds, lattice_sweep, FrameParams, FrameReport, FrameVerdict};
use shiftframe::pointset::make_jittered;
use shiftframe::pregramian::{sampling_bounds, SamplingOptions, SamplingVerdict};
use shiftframe::reconstruct::{interpolate, recover, synthesize, window_nodes, SolveOptions};
use shiftframe::zak::{modulated_zak, quasi_periodicity_residual, zak_zero_search};
use shiftframe::{CoeffSeq, Generator, GeneratorSpec, PointSet};

const BETAS_BELOW: [f64; 4] = [0.5, 0.7, 0.9, 0.95];

type Criterion = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn params(t: f64) -> FrameParams {
    FrameParams {
        t,
        margin: 12,
        x_resolution: 64,
        ..FrameParams::default()
    }
}

fn ratio(r: &FrameReport) -> f64 {
    r.a_est / r.b_est
}

/// Shared by the first two criteria: bounded below off the critical density,
/// collapse at `alpha beta = 1`, and a lower bound that keeps falling with `T`.
fn lattice_law(spec: &GeneratorSpec, check_verdicts: bool) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    let below = lattice_sweep(spec, 1.0, &BETAS_BELOW, &params(40.0)).expect("sweep below critical density");
    for r in &below {
        let ok = r.a_est > 1e-4 * r.b_est && (!check_verdicts || r.verdict == FrameVerdict::Frame);
        pass &= ok;
        detail.push(format!("beta={} A/B={:.3e} {}", r.beta, ratio(r), r.verdict.as_str()));
    }
    let critical: Vec<FrameReport> = [30.0, 40.0, 50.0]
        .iter()
        .map(|&t| {
            lattice_sweep(spec, 1.0, &[1.0], &params(t))
                .expect("critical sweep")
                .remove(0)
        })
        .collect();
    let at40 = &critical[1];
    let tiny = at40.a_est < 1e-6 * at40.b_est;
    let decreasing = critical.windows(2).all(|w| w[1].a_est < w[0].a_est);
    let verdict_ok = !check_verdicts || at40.verdict == FrameVerdict::NotFrame;
    pass &= tiny && decreasing && verdict_ok;
    detail.push(format!(
        "beta=1 A/B at T=30,40,50: {:.3e}, {:.3e}, {:.3e} (need < 1e-6 at T=40: {}; decreasing: {}; verdict {})",
        ratio(&critical[0]),
        ratio(&critical[1]),
        ratio(&critical[2]),
        tiny,
        decreasing,
        at40.verdict.as_str()
    ));
    Outcome {
        pass,
        detail: detail.join("; "),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut out = lattice_law(&GeneratorSpec::standard_gaussian(), false);
    let secs = start.elapsed().as_secs_f64();
    out.pass &= secs <= 300.0;
    out.detail.push_str(&format!("; {secs:.1}s"));
    out
}

fn criterion_2() -> Outcome {
    let a = lattice_law(&GeneratorSpec::gaussian_type(vec![0.3], PI), true);
    let b = lattice_law(&GeneratorSpec::gaussian_type(vec![0.3, -0.2], PI), true);
    Outcome {
        pass: a.pass && b.pass,
        detail: format!("deltas=[0.3]: {} | deltas=[0.3,-0.2]: {}", a.detail, b.detail),
    }
}

fn criterion_3() -> Outcome {
    let spec = GeneratorSpec::OneSidedExp { delta: 1.0 };
    let lattice = PointSet::lattice_covering(1.0, 41.0).unwrap();
    let r = frame_bounds(&spec, &lattice, 1.0, &params(40.0)).expect("one-sided frame bounds");
    Outcome {
        pass: r.a_est > 1e-4 * r.b_est,
        detail: format!("A/B={:.3e} verdict {}", ratio(&r), r.verdict.as_str()),
    }
}

fn criterion_4() -> Outcome {
    let specs = [
        GeneratorSpec::standard_gaussian(),
        GeneratorSpec::gaussian_type(vec![0.3], PI),
    ];
    let opts = SamplingOptions::default();
    let mut sampling = 0;
    let mut worst = f64::INFINITY;
    for spec in &specs {
        let g = Generator::new(spec).unwrap();
        for seed in 1..=20 {
            let p = make_jittered(0.8, 0.1, seed, 60).unwrap();
            let b = sampling_bounds(&g, &p, &opts).expect("jittered sampling bounds");
            worst = worst.min(b.a_est / b.b_est);
            sampling += (b.verdict == SamplingVerdict::Sampling) as usize;
        }
    }
    let sparse = PointSet::lattice(2.0, 30).unwrap();
    let mut rejected = 0;
    for spec in &specs {
        let g = Generator::new(spec).unwrap();
        let b = sampling_bounds(&g, &sparse, &opts).expect("2Z sampling bounds");
        rejected += (b.verdict == SamplingVerdict::NotSampling) as usize;
    }
    Outcome {
        pass: sampling == 40 && rejected == 2,
        detail: format!("{sampling}/40 jittered sets sampling (min A/B {worst:.3e}); 2Z rejected {rejected}/2"),
    }
}

fn criterion_5() -> Outcome {
    let g = Generator::new(&GeneratorSpec::standard_gaussian()).unwrap();
    let p = make_jittered(0.8, 0.1, 7, 60).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let truth = CoeffSeq::new(-20, (0..41).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    let nodes = window_nodes(&p, 40.0);
    let samples: Vec<f64> = nodes
        .iter()
        .map(|&x| synthesize(&g, &truth, x, 1e-14).unwrap())
        .collect();
    let rec = recover(&g, &p, &samples, 40.0, 12, &SolveOptions::default()).expect("recovery");
    let (lo, hi) = (rec.coeffs.offset, rec.coeffs.last_index());
    let err = rec
        .coeffs
        .iter()
        .map(|(k, v)| (v - truth.get(k)).powi(2))
        .sum::<f64>()
        .sqrt()
        / truth.restrict(lo, hi).norm2();

    let lattice = PointSet::lattice(1.25, 60).unwrap();
    let mut gains = Vec::new();
    let mut op_norms = Vec::new();
    let mut worst_residual = 0.0f64;
    for t in [30.0, 40.0] {
        let n = window_nodes(&lattice, t).len();
        let mut a = vec![0.0; n];
        a[n / 2] = 1.0;
        let r = interpolate(&g, &lattice, &a, t, &SolveOptions::default()).expect("interpolation");
        worst_residual = worst_residual.max(r.residual_l2);
        gains.push(r.gain(1.0));
        op_norms.push(1.0 / r.sigma_min);
    }
    let stable = |v: &[f64]| (v[0] - v[1]).abs() <= 0.1 * v[0].min(v[1]);
    Outcome {
        pass: err < 1e-8 && worst_residual < 1e-10 && stable(&gains) && stable(&op_norms),
        detail: format!(
            "recovery rel err {err:.2e}; interpolation residual {worst_residual:.2e}; \
             |c|/|a| at T=30,40: {:.6}, {:.6}; 1/sigma_min: {:.6}, {:.6}",
            gains[0], gains[1], op_norms[0], op_norms[1]
        ),
    }
}

fn criterion_6() -> Outcome {
    let g = Generator::new(&GeneratorSpec::standard_gaussian()).unwrap();
    let qp = quasi_periodicity_residual(&g, 64, 1e-12).unwrap();
    let zeros = zak_zero_search(&g, 64, 1e-8).unwrap();
    let near = zeros
        .iter()
        .find(|z| (z.x - 0.5).abs() < 1e-3 && (z.xi - 0.5).abs() < 1e-3)
        .copied();

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = CoeffSeq::new(-2, (0..5).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    let d = CoeffSeq::new(-1, (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect());
    let cs: Vec<_> = c.iter().collect();
    let ds: Vec<_> = d.iter().collect();
    let gamma = |y: f64| oracles::modulated(&|s| oracles::gaussian(PI, s), &cs, &ds, y);
    let mut mismatch = 0.0f64;
    for _ in 0..100 {
        let (x, xi) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let f = modulated_zak(&g, &c, &d, x, xi, 1e-13).unwrap();
        mismatch = mismatch.max((f - oracles::zak_direct(gamma, x, xi, 16)).norm());
    }
    let zero_ok = near.is_some_and(|z| z.abs < 1e-8);
    Outcome {
        pass: qp < 1e-10 && zero_ok && mismatch < 1e-9,
        detail: format!(
            "quasi-periodicity residual {qp:.2e}; zero {}; factorisation mismatch {mismatch:.2e}",
            near.map_or("not found near (0.5, 0.5)".to_string(), |z| format!(
                "at ({:.9}, {:.9}) |Z|={:.1e}",
                z.x, z.xi, z.abs
            ))
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for deltas in [vec![0.3], vec![0.3, -0.2]] {
        let spec = GeneratorSpec::gaussian_type(deltas.clone(), PI);
        let audits = rolle_trials(&spec, &RolleTrialConfig::default()).expect("rolle trials");
        let ok = audits.iter().filter(|a| a.ok).count();
        let zeros: usize = audits.iter().map(|a| a.before.count).sum();
        pass &= ok == audits.len();
        detail.push(format!(
            "n={}: {ok}/{} ok ({zeros} zeros before)",
            deltas.len(),
            audits.len()
        ));
    }

    // (I + delta d/dx) f against the reduced window, by central differences
    let spec = GeneratorSpec::gaussian_type(vec![0.3, -0.2], PI);
    let g = Generator::new(&spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let c = CoeffSeq::new(-8, (0..17).map(|_| rng.gen_range(-1.0..=1.0)).collect());
        for (j, delta) in [(1usize, 0.3), (2, -0.2)] {
            let reduced = Generator::new(&shiftframe::generator::reduce(&spec, j).unwrap()).unwrap();
            for i in 0..=200 {
                let x = -5.0 + i as f64 * 0.05;
                let f = |y: f64| synthesize(&g, &c, y, 1e-12).unwrap();
                let lhs = f(x) + delta * oracles::central_difference(f, x, 1e-5);
                let rhs = synthesize(&reduced, &c, x, 1e-12).unwrap();
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    pass &= worst < 1e-6;
    detail.push(format!("operator transfer error {worst:.2e}"));
    Outcome {
        pass,
        detail: detail.join("; "),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut jensen_ok = 0;
    let mut monotone = 0;
    let mut min_margin = f64::INFINITY;
    let mut max_zeros = 0;
    for _ in 0..10 {
        let atoms = (0..5)
            .map(|_| {
                (
                    rng.gen_range(-2.0..2.0),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let mu = DiscreteMeasure::new(atoms).unwrap();
        let audit = jensen_audit(&mu, &[1.0, 2.0, 3.0]).expect("jensen audit");
        jensen_ok += audit.rows.iter().all(|r| r.ok) as usize;
        min_margin = audit.rows.iter().map(|r| r.margin).fold(min_margin, f64::min);
        let counts: Vec<usize> = (1..=12)
            .map(|i| disk_zero_count(&mu, 0.25 * i as f64, DEFAULT_CIRCLE_SAMPLES).expect("disk count"))
            .collect();
        max_zeros = max_zeros.max(*counts.last().unwrap());
        monotone += counts.windows(2).all(|w| w[0] <= w[1]) as usize;
    }
    Outcome {
        pass: jensen_ok == 10 && monotone == 10,
        detail: format!(
            "Jensen ok {jensen_ok}/10 (min margin {min_margin:.3}); N(r) nondecreasing {monotone}/10; up to {max_zeros} zeros in |z|<3"
        ),
    }
}

fn criterion_9() -> Outcome {
    let lattice = PointSet::lattice_covering(0.8, 41.0).unwrap();
    let r = frame_bounds(&GeneratorSpec::standard_gaussian(), &lattice, 1.0, &params(40.0)).expect("frame bounds");
    let (lo, hi) = oracles::discrete_gabor_bounds(0.8, 1.0, 0.1, 40.0);
    let rel = (r.a_est - lo).abs() / lo;
    Outcome {
        pass: rel < 0.25,
        detail: format!(
            "A_est={:.5} oracle A={lo:.5} (rel diff {rel:.2e}); B_est={:.5} oracle B={hi:.5}",
            r.a_est, r.b_est
        ),
    }
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("lattice frame law, Gaussian", criterion_1),
        ("lattice frame law, Gaussian-type windows", criterion_2),
        ("one-sided exponential at critical density", criterion_3),
        ("nonuniform sampling", criterion_4),
        ("reconstruction and interpolation", criterion_5),
        ("Zak identities", criterion_6),
        ("Rolle audit and operator transfer", criterion_7),
        ("Jensen audit", criterion_8),
        ("duality against discrete Gabor oracle", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        failed += !out.pass as usize;
        println!(
            "criterion {} [{}] {}: {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            name,
            out.detail
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
