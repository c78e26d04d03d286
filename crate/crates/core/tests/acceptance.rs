//! The ten acceptance criteria, one line of output each.
//!
//! The library checks in `pencil::verify` carry the printed tables. The
//! lattice and product counts below are recomputed here from scratch so
//! that criteria 8 and 10 do not only compare the library with itself.

use pencil::modular::{eisenstein_e4, gamma_series, theta_e8};
use pencil::verify::{run_criterion, CRITERIA};

const ORDER: i64 = 20;

/// Number of E8 vectors of each half-norm below `order`, by walking the
/// even coordinate system (D8 plus the half-integer coset).
fn e8_count_oracle(order: usize) -> Vec<i64> {
    let max_sq = 4 * (2 * order as i64 - 2); // Σ (2x_i)² ≤ 4·norm
    let mut counts = vec![0i64; order];
    // doubled coordinates y_i = 2x_i, all even or all odd, Σ y_i ≡ 0 mod 4
    let bound = (max_sq as f64).sqrt() as i64 + 1;
    for parity in [0i64, 1] {
        let vals: Vec<i64> = (-bound..=bound).filter(|y| y.rem_euclid(2) == parity).collect();
        let mut stack = vec![(0usize, 0i64, 0i64)];
        while let Some((depth, sq, sum)) = stack.pop() {
            if depth == 8 {
                if sum.rem_euclid(4) == 0 {
                    // x·x = sq/4 and the half-norm is sq/8
                    let k = (sq / 8) as usize;
                    if sq % 8 == 0 && k < order {
                        counts[k] += 1;
                    }
                }
                continue;
            }
            for &y in &vals {
                let s = sq + y * y;
                if s <= max_sq {
                    stack.push((depth + 1, s, sum + y));
                }
            }
        }
    }
    counts
}

/// Coefficients of ∏(1 − q^{3n}) by multiplying factors out.
fn gamma_oracle(order: usize) -> Vec<i64> {
    let mut c = vec![0i64; order];
    c[0] = 1;
    for n in (3..order).step_by(3) {
        for k in (n..order).rev() {
            c[k] -= c[k - n];
        }
    }
    c
}

fn coeffs(s: &pencil::series::QSeries, n: i64) -> Vec<i64> {
    s.int_coeffs(n)
        .iter()
        .map(|c| i64::try_from(c.to_integer()).expect("small integer"))
        .collect()
}

fn oracle_checks(id: u8) -> Option<String> {
    match id {
        8 => {
            let got = coeffs(&gamma_series(40).ok()?, 40);
            (got != gamma_oracle(40)).then(|| "γ differs from the product oracle".into())
        }
        10 => {
            let oracle = e8_count_oracle(ORDER as usize);
            if coeffs(&theta_e8(ORDER), ORDER) != oracle {
                return Some("lattice enumeration differs from the coordinate count".into());
            }
            (coeffs(&eisenstein_e4(ORDER), ORDER) != oracle).then(|| "E4 differs from the coordinate count".into())
        }
        _ => None,
    }
}

fn main() {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let mut report = run_criterion(id, ORDER);
        if let Some(why) = oracle_checks(id) {
            report.passed = false;
            report.detail = why;
        }
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{status}] {}: {}", report.id, report.title, report.detail);
        if !report.passed {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", CRITERIA.len());
}
