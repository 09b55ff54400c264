use selinfer::normal::normal_sf;
use selinfer::procedures::{bh, hochberg2, mabh2};
use selinfer::winner::{procedure_c, winner_adjust_nonselected, winner_adjust_selected, winner_select};
use selinfer::{error_value, ErrorRateKind, IndexSet, PVector, RngStream, TruthMask};

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Kolmogorov–Smirnov distance of a sample from U(0,1).
fn ks_uniform(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(k, &x)| ((k + 1) as f64 / n - x).max(x - k as f64 / n))
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at level 0.01.
fn ks_critical_01(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

fn draw(stream: &mut RngStream, n: usize, alternatives: usize, shift: f64) -> PVector {
    PVector::new(
        (0..n)
            .map(|j| {
                if j < alternatives {
                    normal_sf(stream.standard_normal() + shift)
                } else {
                    stream.uniform_open01()
                }
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn bh_fdr_equals_null_fraction_times_alpha() {
    // with independent p-values BH's FDR is exactly n0/n · α
    let (n, k, alpha) = (10, 2, 0.1);
    let truth = TruthMask::new((0..n).map(|j| j >= k).collect());
    let fdps: Vec<f64> = (0..40_000)
        .map(|r| {
            let p = draw(&mut RngStream::new(11, r), n, k, 2.0);
            let rej = bh(&p, alpha).unwrap();
            error_value(ErrorRateKind::Fdr, &rej, &IndexSet::full(n), &truth).unwrap()
        })
        .collect();
    let (m, se) = mean_se(&fdps);
    assert!((m - 0.08).abs() < 4.0 * se, "FDR {m} ± {se}");
}

#[test]
fn hochberg_and_mabh_control_their_rates_under_the_global_null() {
    let alpha = 0.2;
    let truth = TruthMask::all_null(2);
    let all = IndexSet::full(2);
    let (mut fwer, mut fdr) = (Vec::new(), Vec::new());
    for r in 0..40_000 {
        let mut s = RngStream::new(12, r);
        let (p1, p2) = (s.uniform_open01(), s.uniform_open01());
        fwer.push(error_value(ErrorRateKind::Fwer, &hochberg2(p1, p2, alpha).unwrap(), &all, &truth).unwrap());
        fdr.push(error_value(ErrorRateKind::Fdr, &mabh2(p1, p2, alpha).unwrap(), &all, &truth).unwrap());
    }
    let (m, se) = mean_se(&fwer);
    assert!(m <= alpha + 3.0 * se, "hochberg FWER {m}");
    let (m, se) = mean_se(&fdr);
    assert!(m <= alpha + 3.0 * se, "mabh FDR {m}");
}

#[test]
fn mabh_fdr_with_one_false_null() {
    let alpha = 0.2;
    let truth = TruthMask::from_nulls(2, &[2]).unwrap();
    let all = IndexSet::full(2);
    let fdr: Vec<f64> = (0..40_000)
        .map(|r| {
            let mut s = RngStream::new(13, r);
            let p1 = normal_sf(s.standard_normal() + 1.0);
            let p2 = s.uniform_open01();
            error_value(ErrorRateKind::Fdr, &mabh2(p1, p2, alpha).unwrap(), &all, &truth).unwrap()
        })
        .collect();
    let (m, se) = mean_se(&fdr);
    assert!(m <= alpha + 3.0 * se, "FDR {m}");
}

#[test]
fn adjusted_winner_p_values_are_uniform_under_the_global_null() {
    let n = 8;
    let (mut winners, mut others) = (Vec::new(), Vec::new());
    for r in 0..5_000 {
        let p = draw(&mut RngStream::new(14, r), n, 0, 0.0);
        let w = winner_select(&p).unwrap();
        winners.push(winner_adjust_selected(&p, w).unwrap());
        // one fixed non-winner per replicate keeps the sample independent
        let j = if w == 1 { 2 } else { 1 };
        others.push(winner_adjust_nonselected(p.get(j), p.get(w)).unwrap());
    }
    let crit = ks_critical_01(5_000);
    let d = ks_uniform(winners);
    assert!(d < crit, "winner KS {d} vs {crit}");
    let d = ks_uniform(others);
    assert!(d < crit, "non-selected KS {d} vs {crit}");
}

#[test]
fn procedure_c_exhausts_alpha_under_the_global_null() {
    let (n, alpha) = (20, 0.1);
    let hits: Vec<f64> = (0..40_000)
        .map(|r| {
            let p = draw(&mut RngStream::new(15, r), n, 0, 0.0);
            procedure_c(&p, alpha).unwrap().rejected.len() as f64
        })
        .collect();
    let (m, se) = mean_se(&hits);
    assert!((m - alpha).abs() < 4.0 * se, "{m} ± {se}");
}
