//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them). The expensive
//! (128,64) sweeps and spectra are computed once and shared.

use pac_codes::analysis::{
    biawgn_capacity_dispersion, estimate_spectrum, normal_approximation, truncated_union_bound,
    WeightSpectrum,
};
use pac_codes::channel::{modulate, random_data, ChannelConfig};
use pac_codes::codespec::bit_reverse;
use pac_codes::encoder::{self, encode, DataWord};
use pac_codes::harness::{
    classify_list, run_fer, BiasRule, DecoderKind, Outcome, SimReport, StoppingRule,
};
use pac_codes::scl::{decision_node_count, decision_node_count_inclusive, ListDecoder};
use pac_codes::{bits, CodeSpec, Generator, ProfileRule};
use std::sync::OnceLock;
use std::time::Instant;

fn spec_16_8() -> CodeSpec {
    CodeSpec::new(16, 8, &ProfileRule::Rm, Generator::parse("1011").unwrap()).unwrap()
}

fn spec_128_64() -> CodeSpec {
    CodeSpec::new(128, 64, &ProfileRule::Rm, Generator::arikan()).unwrap()
}

fn pass(criterion: u32, detail: &str) {
    println!("acceptance: criterion {criterion} PASS - {detail}");
}

// ---------------------------------------------------------------------------
// shared expensive artifacts

const SWEEP_SNRS: [f64; 4] = [1.5, 2.0, 2.5, 3.0];
const SWEEP_STOP: StoppingRule = StoppingRule { min_frame_errors: 100, max_frames: 400_000 };
const SWEEP_SEED: u64 = 2020;

struct Sweeps {
    l128: SimReport,
    l256: SimReport,
    fano: SimReport,
}

fn sweeps() -> &'static Sweeps {
    static CELL: OnceLock<Sweeps> = OnceLock::new();
    CELL.get_or_init(|| {
        let spec = spec_128_64();
        let l128 = run_fer(
            &spec,
            &DecoderKind::List { list_size: 128 },
            &SWEEP_SNRS,
            &SWEEP_STOP,
            SWEEP_SEED,
        )
        .unwrap();
        let l256 = run_fer(
            &spec,
            &DecoderKind::List { list_size: 256 },
            &SWEEP_SNRS,
            &SWEEP_STOP,
            SWEEP_SEED,
        )
        .unwrap();
        let fano = run_fer(
            &spec,
            &DecoderKind::Fano {
                delta: 2.0,
                cycle_cap: 1_300_000,
                bias: BiasRule::Reliability,
            },
            &SWEEP_SNRS,
            &SWEEP_STOP,
            SWEEP_SEED,
        )
        .unwrap();
        Sweeps { l128, l256, fano }
    })
}

fn pac_rm_spectrum() -> &'static WeightSpectrum {
    static CELL: OnceLock<WeightSpectrum> = OnceLock::new();
    CELL.get_or_init(|| estimate_spectrum(&spec_128_64(), 400_000, 8.0, 24, 42).unwrap())
}

// ---------------------------------------------------------------------------
// criterion 1: exhaustive encoder oracle at (16,8)

/// Dense GF(2) oracle: explicit Toeplitz T and explicit B_n F^(m).
fn dense_generator_matrix(spec: &CodeSpec) -> Vec<Vec<bool>> {
    let n = spec.n();
    let m = spec.m();
    let g = spec.generator();
    // T[i][i+j] = c_j
    let mut t = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..g.len() {
            if i + j < n {
                t[i][i + j] = g.coeff(j);
            }
        }
    }
    // F^(m) by Kronecker powers, then row bit-reversal for B_n
    let mut f = vec![vec![true]];
    for _ in 0..m {
        let half = f.len();
        let mut next = vec![vec![false; 2 * half]; 2 * half];
        for r in 0..half {
            for c in 0..half {
                if f[r][c] {
                    next[r][c] = true;
                    next[r + half][c] = true;
                    next[r + half][c + half] = true;
                }
            }
        }
        f = next;
    }
    let p: Vec<Vec<bool>> = (0..n).map(|i| f[bit_reverse(i, m).unwrap()].clone()).collect();
    // rows of the code generator: e_{a_j} T P for each profile position
    let matmul = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        let rows = a.len();
        let cols = b[0].len();
        let mut out = vec![vec![false; cols]; rows];
        for r in 0..rows {
            for (mid, b_row) in b.iter().enumerate() {
                if a[r][mid] {
                    for c in 0..cols {
                        out[r][c] ^= b_row[c];
                    }
                }
            }
        }
        out
    };
    let tp = matmul(&t, &p);
    spec.profile().iter().map(|&a| tp[a].clone()).collect()
}

#[test]
fn criterion_1_exhaustive_encoder_oracle() {
    let start = Instant::now();
    let spec = spec_16_8();
    let gmat = dense_generator_matrix(&spec);
    let mut mismatches = 0;
    for word in 0..256u32 {
        let d = DataWord((0..8).map(|b| (word >> b) & 1 == 1).collect());
        let x = encode(&d, &spec).unwrap();
        let mut oracle = vec![false; 16];
        for (j, &bit) in d.0.iter().enumerate() {
            if bit {
                for c in 0..16 {
                    oracle[c] ^= gmat[j][c];
                }
            }
        }
        if x.0 != oracle {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(mismatches, 0);
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(1, &format!("256/256 codewords match the dense GF(2) oracle in {elapsed:?}"));
}

// ---------------------------------------------------------------------------
// criterion 2: ML equivalence at small scale

#[test]
fn criterion_2_ml_equivalence_10k_frames() {
    let start = Instant::now();
    let spec = spec_16_8();
    let cfg = ChannelConfig::new(2.0, 0.5, 161_803).unwrap();
    let codebook: Vec<(Vec<bool>, Vec<f64>)> = (0..256u32)
        .map(|w| {
            let d = DataWord((0..8).map(|b| (w >> b) & 1 == 1).collect());
            let x = encode(&d, &spec).unwrap();
            let s = modulate(&x.0);
            (x.0, s)
        })
        .collect();
    let mut dec = ListDecoder::new(&spec, 256).unwrap();
    let frames = 10_000u64;
    let mut scl_errors = 0u64;
    let mut ml_errors = 0u64;
    for frame in 0..frames {
        let mut rng = cfg.frame_rng(frame);
        let d = DataWord(random_data(&mut rng, 8));
        let x = encode(&d, &spec).unwrap();
        let y = cfg.transmit(&modulate(&x.0), &mut rng);
        let llrs = cfg.llr(&y);
        let list = dec.decode(&llrs).unwrap();
        let scl_best = list.best().codeword().0;
        let ml_best = codebook
            .iter()
            .map(|(bits, s)| {
                let corr: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
                (bits, corr)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1).then_with(|| b.0.cmp(a.0)))
            .unwrap()
            .0
            .clone();
        assert_eq!(scl_best, ml_best, "frame {frame}: list != ML output");
        if scl_best != x.0 {
            scl_errors += 1;
        }
        if ml_best != x.0 {
            ml_errors += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(scl_errors, ml_errors, "error sets must coincide");
    assert!(scl_errors > 0, "2.0 dB at (16,8) must produce some errors");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(
        2,
        &format!(
            "L=256 matched brute-force ML on {frames} frames ({scl_errors} identical errors) in {elapsed:?}"
        ),
    );
}

// ---------------------------------------------------------------------------
// criterion 3: Table-I reproduction at (128,64), L = 400,000

#[test]
fn criterion_3_table_reproduction_pac_rm() {
    let s = pac_rm_spectrum();
    assert_eq!(s.min_weight(), Some(16), "no nonzero codeword below weight 16");
    assert_eq!(s.count(16), 3120, "A_16");
    assert_eq!(s.count(18), 2696, "A_18");
    assert!(s.saturated[&16], "A_16 saturation flag");
    assert!(s.saturated[&18], "A_18 saturation flag");
    assert!(s.count(20) >= 95_828, "A_20 = {} < 95828", s.count(20));
    pass(
        3,
        &format!(
            "A_16={} (sat), A_18={} (sat), A_20={} at L=400000",
            s.count(16),
            s.count(18),
            s.count(20)
        ),
    );
}

// ---------------------------------------------------------------------------
// criterion 4: Reed-Muller oracle

#[test]
fn criterion_4_reed_muller_weight_16_count() {
    // the self-dual (128,64,16) Reed-Muller code has exactly 94488 words of
    // weight 16 (known value, used here as the oracle)
    const RM_A16: u64 = 94_488;
    let spec = CodeSpec::new(128, 64, &ProfileRule::Rm, Generator::identity()).unwrap();
    let s = estimate_spectrum(&spec, 400_000, 8.0, 8, 42).unwrap();
    assert_eq!(s.count(16), RM_A16);
    assert!(s.saturated[&16], "A_16 must be saturated");
    assert_eq!(s.min_weight(), Some(16));
    assert_eq!(s.count(8), 0);
    assert_eq!(s.count(12), 0);
    pass(4, &format!("Reed-Muller A_16={} saturated at L=400000", s.count(16)));
}

// ---------------------------------------------------------------------------
// criterion 5: complexity counters

#[test]
fn criterion_5_decision_node_counters() {
    let spec = spec_128_64();
    for l in [1usize, 4, 32, 128] {
        let expect = decision_node_count(l as u64, 64);
        let mut dec = ListDecoder::new(&spec, l).unwrap();
        let mut seen = Vec::new();
        for ebno in [0.0, 3.0] {
            let cfg = ChannelConfig::new(ebno, 0.5, 5).unwrap();
            let mut rng = cfg.frame_rng(0);
            let d = DataWord(random_data(&mut rng, 64));
            let x = encode(&d, &spec).unwrap();
            let y = cfg.transmit(&modulate(&x.0), &mut rng);
            dec.decode(&cfg.llr(&y)).unwrap();
            let c = dec.counters();
            assert_eq!(c.decision_nodes, expect, "L={l}");
            seen.push((c.decision_nodes, c.flops));
        }
        assert_eq!(seen[0], seen[1], "L={l}: counters must be bit-identical across SNR");
    }
    assert_eq!(decision_node_count(128, 64), 7423);
    assert_eq!(decision_node_count_inclusive(128, 64), 7551);
    // the simulate report prints both conventions
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_pac"))
        .args([
            "simulate", "--n", "128", "--k", "64", "--profile", "rm", "--generator", "1011011",
            "--decoder", "list", "--list-size", "128", "--snr-list", "2.0", "--seed", "1",
            "--min-errors", "1", "--max-frames", "256",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("7423") && text.contains("7551"), "report must print both conventions");
    pass(5, "runtime counter = sum min(2^(i-1),L) for L in {1,4,32,128}, SNR-invariant; 7423/7551 reported");
}

// ---------------------------------------------------------------------------
// criterion 6: list-vs-sequential performance

/// Horizontal SNR offset from `point` to the log-linear interpolation of
/// `curve`; None when the FER lies outside the curve's range.
fn horizontal_offset(point: (f64, f64), curve: &[(f64, f64)]) -> Option<f64> {
    let (snr, fer) = point;
    if fer <= 0.0 {
        return None;
    }
    let lf = fer.ln();
    for w in curve.windows(2) {
        let (s0, f0) = w[0];
        let (s1, f1) = w[1];
        if f0 <= 0.0 || f1 <= 0.0 {
            continue;
        }
        let (hi, lo) = (f0.ln(), f1.ln());
        if lf <= hi && lf >= lo {
            let t = (hi - lf) / (hi - lo);
            return Some((s0 + t * (s1 - s0) - snr).abs());
        }
    }
    None
}

#[test]
fn criterion_6_list_matches_sequential() {
    let start = Instant::now();
    let s = sweeps();
    // (a) Fano and L=256 agree within 3 combined standard errors everywhere
    for (rf, rl) in s.fano.rows.iter().zip(&s.l256.rows) {
        let se = (rf.fer_stderr.powi(2) + rl.fer_stderr.powi(2)).sqrt();
        let gap = (rf.fer - rl.fer).abs();
        assert!(
            gap <= 3.0 * se,
            "at {} dB: fano {:.3e} vs L=256 {:.3e}, gap {:.3e} > 3 se {:.3e}",
            rf.snr_db,
            rf.fer,
            rl.fer,
            gap,
            3.0 * se
        );
    }
    // (b) L=128 lies within 0.1 dB horizontally of the L=256 curve
    let curve256: Vec<(f64, f64)> = s.l256.rows.iter().map(|r| (r.snr_db, r.fer)).collect();
    let mut checked = 0;
    for r in &s.l128.rows {
        if let Some(off) = horizontal_offset((r.snr_db, r.fer), &curve256) {
            assert!(off <= 0.1, "at {} dB: horizontal offset {:.3} dB > 0.1", r.snr_db, off);
            checked += 1;
        }
    }
    assert!(checked >= 2, "need at least two interior points, got {checked}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 3600.0);
    let detail: Vec<String> = s
        .l256
        .rows
        .iter()
        .zip(&s.fano.rows)
        .map(|(l, f)| format!("{}dB: L256 {:.2e} / fano {:.2e}", l.snr_db, l.fer, f.fer))
        .collect();
    pass(6, &format!("{} ({checked} horizontal checks <= 0.1 dB)", detail.join("; ")));
}

// ---------------------------------------------------------------------------
// criterion 7: outcome taxonomy

#[test]
fn criterion_7_failure_and_selection_fractions() {
    // Fano failure fraction below 10% of FER events at 1.00..2.25 dB
    let spec = spec_128_64();
    let snrs = [1.0, 1.25, 1.5, 1.75, 2.0, 2.25];
    let report = run_fer(
        &spec,
        &DecoderKind::Fano { delta: 2.0, cycle_cap: 1_300_000, bias: BiasRule::Reliability },
        &snrs,
        &StoppingRule { min_frame_errors: 100, max_frames: 100_000 },
        77,
    )
    .unwrap();
    let mut fracs = Vec::new();
    for r in &report.rows {
        let events = r.errors + r.failures;
        assert!(events >= 100, "need full error counts at {} dB", r.snr_db);
        let frac = r.failures as f64 / events as f64;
        assert!(frac < 0.10, "failure fraction {frac:.3} at {} dB", r.snr_db);
        fracs.push(format!("{}dB {:.2}%", r.snr_db, 100.0 * frac));
    }
    // selection-error fraction at L=256 increases from 1.5 to 3.0 dB
    let s = sweeps();
    let sel = |row: &pac_codes::harness::SnrRow| row.selection_errors as f64 / row.errors as f64;
    let first = sel(&s.l256.rows[0]);
    let last = sel(s.l256.rows.last().unwrap());
    assert!(
        last > first,
        "selection fraction must rise with SNR: {first:.3} -> {last:.3}"
    );
    pass(
        7,
        &format!(
            "failures [{}] all < 10%; selection fraction {:.1}% -> {:.1}%",
            fracs.join(", "),
            100.0 * first,
            100.0 * last
        ),
    );
}

// ---------------------------------------------------------------------------
// criterion 8: ML lower bound

#[test]
fn criterion_8_ml_lower_bound() {
    let start = Instant::now();
    // (a) lb <= FER pointwise on the (128,64) sweeps
    let s = sweeps();
    for report in [&s.l128, &s.l256, &s.fano] {
        for r in &report.rows {
            let lb = r.ml_lb as f64 / r.frames as f64;
            assert!(lb <= r.fer + 1e-12, "lb {lb:.3e} above FER {:.3e}", r.fer);
        }
    }
    // (b) (16,8): no frame is counted where exhaustive ML would succeed
    let spec = spec_16_8();
    let cfg = ChannelConfig::new(2.0, 0.5, 271_828).unwrap();
    let codebook: Vec<(Vec<bool>, Vec<f64>)> = (0..256u32)
        .map(|w| {
            let d = DataWord((0..8).map(|b| (w >> b) & 1 == 1).collect());
            let x = encode(&d, &spec).unwrap();
            let s = modulate(&x.0);
            (x.0, s)
        })
        .collect();
    let mut dec = ListDecoder::new(&spec, 8).unwrap();
    let mut counted = 0u64;
    for frame in 0..10_000u64 {
        let mut rng = cfg.frame_rng(frame);
        let d = DataWord(random_data(&mut rng, 8));
        let v = encoder::insert_profile(&d, &spec).unwrap();
        let tx_u = encoder::convolve(&v, spec.generator());
        let x = encoder::polar_transform(&tx_u).unwrap();
        let y = cfg.transmit(&modulate(&x.0), &mut rng);
        let llrs = cfg.llr(&y);
        let list = dec.decode(&llrs).unwrap();
        let tx_words = bits::pack(&tx_u.0);
        if let Outcome::Error { ml_lb: true, .. } =
            classify_list(&tx_words, &tx_u, &list, &llrs, &spec).unwrap()
        {
            counted += 1;
            let ml_best = codebook
                .iter()
                .map(|(bits, sym)| {
                    let corr: f64 = sym.iter().zip(&y).map(|(a, b)| a * b).sum();
                    (bits, corr)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1).then_with(|| b.0.cmp(a.0)))
                .unwrap()
                .0
                .clone();
            assert_ne!(ml_best, x.0, "frame {frame} counted toward the bound, but ML succeeds");
        }
    }
    assert!(counted > 0, "test must exercise counted frames");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    pass(8, &format!("lb <= FER on all sweeps; {counted} counted frames all ML-errors ({elapsed:?})"));
}

// ---------------------------------------------------------------------------
// criterion 9: bounds

#[test]
fn criterion_9_bounds() {
    // (a) C and V against an independent adaptive-quadrature oracle, 1e-6
    for snr in [0.0f64, 1.5, 3.0] {
        let sigma = (1.0 / (2.0 * 0.5 * 10f64.powf(snr / 10.0))).sqrt();
        let (c, v) = biawgn_capacity_dispersion(sigma);
        let (c_oracle, v_oracle) = simpson_capacity_dispersion(sigma);
        assert!((c - c_oracle).abs() < 1e-6, "C at {snr} dB: {c:.9} vs {c_oracle:.9}");
        assert!((v - v_oracle).abs() < 1e-6, "V at {snr} dB: {v:.9} vs {v_oracle:.9}");
    }
    // (b) the (128, 1/2) curve lies below the simulated PAC L=128 FER
    let s = sweeps();
    let na = normal_approximation(128, 0.5, &SWEEP_SNRS).unwrap();
    for (r, &(snr, eps)) in s.l128.rows.iter().zip(&na.points) {
        assert_eq!(r.snr_db, snr);
        assert!(
            eps < r.fer,
            "normal approximation {eps:.3e} not below FER {:.3e} at {snr} dB",
            r.fer
        );
    }
    // (c) truncated union bound vs measured ML-lower-bound FER at 3.0 dB
    let spectrum = pac_rm_spectrum();
    let ub = truncated_union_bound(spectrum, 0.5, &[3.0]).points[0].1;
    let row3 = s.l256.rows.last().unwrap();
    let lb_fer = row3.ml_lb as f64 / row3.frames as f64;
    assert!(lb_fer > 0.0, "need ML-lower-bound events at 3.0 dB");
    let ratio = ub / lb_fer;
    assert!(
        (1.0 / 3.0..=3.0).contains(&ratio),
        "union bound {ub:.3e} vs ML-lb FER {lb_fer:.3e}: factor {ratio:.2}"
    );
    pass(
        9,
        &format!(
            "C/V within 1e-6 of quadrature oracle; NA below FER at all {} points; UB/ML-lb factor {ratio:.2} at 3.0 dB",
            SWEEP_SNRS.len()
        ),
    );
}

/// Adaptive-precision Simpson oracle for the BIAWGN capacity/dispersion.
fn simpson_capacity_dispersion(sigma: f64) -> (f64, f64) {
    let f = |y: f64, power: i32| -> f64 {
        let dens = (-(y - 1.0) * (y - 1.0) / (2.0 * sigma * sigma)).exp()
            / (2.0 * std::f64::consts::PI * sigma * sigma).sqrt();
        let l = 2.0 * y / (sigma * sigma);
        let sp = if l > 0.0 { (-l).exp().ln_1p() } else { -l + l.exp().ln_1p() };
        let info = 1.0 - sp / std::f64::consts::LN_2;
        dens * info.powi(power)
    };
    let integrate = |power: i32| -> f64 {
        let (a, b) = (1.0 - 14.0 * sigma, 1.0 + 14.0 * sigma);
        let steps = 400_000;
        let h = (b - a) / steps as f64;
        let mut acc = f(a, power) + f(b, power);
        for i in 1..steps {
            acc += f(a + i as f64 * h, power) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let c = integrate(1);
    let v = integrate(2) - c * c;
    (c, v)
}

// ---------------------------------------------------------------------------
// criterion 10: reproducibility across worker counts

#[test]
fn criterion_10_thread_count_invariance() {
    let base = [
        "simulate", "--n", "128", "--k", "64", "--profile", "rm", "--generator", "1011011",
        "--decoder", "list", "--list-size", "32", "--snr-list", "1.5,2.0", "--seed", "31337",
        "--min-errors", "40", "--max-frames", "3000",
    ];
    let mut bodies = Vec::new();
    for threads in ["1", "2", "4"] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_pac"))
            .args(base)
            .args(["--threads", threads])
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let body: String =
            text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
        bodies.push(body);
    }
    assert_eq!(bodies[0], bodies[1], "1 vs 2 threads");
    assert_eq!(bodies[1], bodies[2], "2 vs 4 threads");
    pass(10, "identical CSV bodies for --threads 1, 2, 4");
}
