//! Closed-form power sums `S_k(m) = 1^k + 2^k + ... + m^k`.
//!
//! Uses Faulhaber's formula with the `B_1 = +1/2` Bernoulli convention:
//!
//! ```text
//! S_k(m) = 1/(k+1) * sum_{j=0..=k} C(k+1, j) * B_j * m^(k+1-j)
//! ```

/// Highest power supported.
pub const MAX_POWER: u32 = 21;

/// Bernoulli numbers `B_0..=B_21` as `(numerator, denominator)`, with `B_1 = +1/2`.
const BERNOULLI: [(f64, f64); MAX_POWER as usize + 1] = [
    (1.0, 1.0),
    (1.0, 2.0),
    (1.0, 6.0),
    (0.0, 1.0),
    (-1.0, 30.0),
    (0.0, 1.0),
    (1.0, 42.0),
    (0.0, 1.0),
    (-1.0, 30.0),
    (0.0, 1.0),
    (5.0, 66.0),
    (0.0, 1.0),
    (-691.0, 2730.0),
    (0.0, 1.0),
    (7.0, 6.0),
    (0.0, 1.0),
    (-3617.0, 510.0),
    (0.0, 1.0),
    (43867.0, 798.0),
    (0.0, 1.0),
    (-174611.0, 330.0),
    (0.0, 1.0),
];

fn bernoulli(j: u32) -> f64 {
    let (n, d) = BERNOULLI[j as usize];
    n / d
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `S_k(m) / m^(k+1)` expressed without large powers:
/// `1/(k+1) * sum_j C(k+1, j) B_j m^(-j)`.
fn normalized(k: u32, m: f64) -> f64 {
    debug_assert!((1..=MAX_POWER).contains(&k));
    let inv_m = m.recip();
    let mut acc = 0.0;
    let mut scale = 1.0;
    for j in 0..=k {
        let b = bernoulli(j);
        if b != 0.0 {
            acc += binomial(k + 1, j) * b * scale;
        }
        scale *= inv_m;
    }
    acc / f64::from(k + 1)
}

/// `S_k(m)` in floating point. Overflows to infinity for large `m^(k+1)`.
pub fn power_sum(k: u32, m: u64) -> f64 {
    assert!((1..=MAX_POWER).contains(&k), "power {k} out of range");
    if m == 0 {
        return 0.0;
    }
    let m = m as f64;
    normalized(k, m) * m.powi(k as i32 + 1)
}

/// `S_k(m) / t^k`, computed as `m * (m/t)^k * normalized` so that neither
/// `m^(k+1)` nor `t^k` is formed.
pub fn scaled_power_sum(k: u32, m: u64, t: f64) -> f64 {
    assert!((1..=MAX_POWER).contains(&k), "power {k} out of range");
    if m == 0 {
        return 0.0;
    }
    let mf = m as f64;
    mf * (mf / t).powi(k as i32) * normalized(k, mf)
}
