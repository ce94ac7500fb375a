//! Bessel functions of the first and second kind, orders 0, 1 and 2.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Upper end of the ascending-series zone.
const SERIES_MAX: f64 = 4.0;
/// Lower end of the Hankel asymptotic zone.
const ASYMPTOTIC_MIN: f64 = 25.0;

/// `J_n(x)` for `n` in `0..=2`.
pub fn bessel_j<T: Real>(order: u32, x: T) -> Result<T> {
    if order > 2 {
        return Err(Error::UnsupportedOrder { function: "bessel_j", order });
    }
    if !x.is_finite() {
        return Err(Error::Domain { function: "bessel_j", x: x.to_f64_lossy() });
    }
    Ok(bessel_j012(x)[order as usize])
}

/// `Y_n(x)` for `n` in `0..=2` and `x > 0`.
pub fn bessel_y<T: Real>(order: u32, x: T) -> Result<T> {
    if order > 2 {
        return Err(Error::UnsupportedOrder { function: "bessel_y", order });
    }
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain { function: "bessel_y", x: x.to_f64_lossy() });
    }
    Ok(bessel_y012(x)[order as usize])
}

/// `[J_0(x), J_1(x), J_2(x)]` for any finite `x`.
pub fn bessel_j012<T: Real>(x: T) -> [T; 3] {
    let ax = x.abs();
    let [j0, j1, j2] = if ax <= T::lit(SERIES_MAX) {
        [series_j(0, ax), series_j(1, ax), series_j(2, ax)]
    } else if ax < T::lit(ASYMPTOTIC_MIN) {
        miller(ax).j
    } else {
        let h = [hankel(0, ax), hankel(1, ax), hankel(2, ax)];
        [h[0].0, h[1].0, h[2].0]
    };
    if x < T::zero() {
        [j0, -j1, j2]
    } else {
        [j0, j1, j2]
    }
}

/// `[Y_0(x), Y_1(x), Y_2(x)]` for `x > 0`; NaN otherwise.
pub fn bessel_y012<T: Real>(x: T) -> [T; 3] {
    bessel_jy012(x).1
}

/// Both kinds at once, sharing the recurrence work. `Y` entries are NaN for
/// `x <= 0`.
pub fn bessel_jy012<T: Real>(x: T) -> ([T; 3], [T; 3]) {
    if !(x > T::zero()) {
        return (bessel_j012(x), [T::nan(); 3]);
    }
    if x <= T::lit(SERIES_MAX) {
        let j = [series_j(0, x), series_j(1, x), series_j(2, x)];
        let y = [series_y(0, x, j[0]), series_y(1, x, j[1]), series_y(2, x, j[2])];
        (j, y)
    } else if x < T::lit(ASYMPTOTIC_MIN) {
        let m = miller(x);
        (m.j, m.y)
    } else {
        let h = [hankel(0, x), hankel(1, x), hankel(2, x)];
        ([h[0].0, h[1].0, h[2].0], [h[0].1, h[1].1, h[2].1])
    }
}

/// `J_n(x) = Σ_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)`.
fn series_j<T: Real>(n: u32, x: T) -> T {
    let half = x / T::lit(2.0);
    let q = -half * half;
    let mut term = T::one();
    for k in 1..=n {
        term = term * half / T::lit(k as f64);
    }
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term = term * q / T::lit((k * (k + n)) as f64);
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() || k > 60 {
            break;
        }
    }
    sum
}

/// Ascending series of `Y_n` for integer `n`, given `J_n(x)`.
fn series_y<T: Real>(n: u32, x: T, jn: T) -> T {
    let pi = T::PI();
    let half = x / T::lit(2.0);
    let q = half * half;
    let gamma = T::lit(T::EULER_GAMMA);

    // -(1/π) (x/2)^(-n) Σ_{k<n} (n-k-1)!/k! (x²/4)^k
    let mut head = T::zero();
    if n > 0 {
        let mut qk = T::one();
        for k in 0..n {
            head = head + T::lit((factorial(n - k - 1) / factorial(k)) as f64) * qk;
            qk = qk * q;
        }
        head = -head / (pi * half.powi(n as i32));
    }

    // -(1/π) (x/2)^n Σ_k [ψ(k+1) + ψ(n+k+1)] (-x²/4)^k / (k! (n+k)!)
    let mut psi_a = -gamma; // ψ(k+1)
    let mut psi_b = -gamma; // ψ(n+k+1)
    for j in 1..=n {
        psi_b = psi_b + T::one() / T::lit(j as f64);
    }
    let mut coeff = T::one() / T::lit(factorial(n) as f64);
    let mut tail = (psi_a + psi_b) * coeff;
    let mut k = 0u32;
    loop {
        k += 1;
        psi_a = psi_a + T::one() / T::lit(k as f64);
        psi_b = psi_b + T::one() / T::lit((n + k) as f64);
        coeff = -coeff * q / T::lit((k * (n + k)) as f64);
        let term = (psi_a + psi_b) * coeff;
        tail = tail + term;
        if term.abs() <= T::epsilon() * tail.abs() || k > 60 {
            break;
        }
    }
    tail = -tail * half.powi(n as i32) / pi;

    head + T::lit(2.0) / pi * half.ln() * jn + tail
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

struct MillerOut<T> {
    j: [T; 3],
    y: [T; 3],
}

/// Backward recurrence from a high starting order, normalized by
/// `1 = J_0 + 2 Σ J_2k`. The second kind follows from the Neumann series
/// `Y_0 = (2/π)(ln(x/2)+γ) J_0 - (4/π) Σ (-1)^k J_2k / k` and its derivative.
fn miller<T: Real>(x: T) -> MillerOut<T> {
    let xf = x.to_f64_lossy();
    let start = ((xf + 20.0 + 10.0 * xf.cbrt()) as usize) | 1; // odd, so the top even order is start - 1
    let two = T::lit(2.0);
    let big = T::lit(1e10);
    let rescale = T::lit(1e-10);

    // Values at orders k+1 and k during the downward sweep.
    let mut above = T::zero();
    let mut cur = T::min_positive_value().sqrt();
    let mut j = [T::zero(); 3];
    let mut norm = T::zero();
    let mut sum_y0 = T::zero();
    let mut sum_y1 = T::zero();
    // J_{2k+1} held until J_{2k-1} is available for the Y_1 sum.
    let mut odd_above = T::zero();

    let mut k = start;
    loop {
        if k <= 2 {
            j[k] = cur;
        }
        if k.is_multiple_of(2) {
            if k == 0 {
                norm = norm + cur;
            } else {
                norm = norm + two * cur;
                let half_k = T::lit((k / 2) as f64);
                let sign = if (k / 2).is_multiple_of(2) { T::one() } else { -T::one() };
                sum_y0 = sum_y0 + sign * cur / half_k;
            }
        } else {
            // odd order k = 2m - 1 closes the m-th Y_1 term: (J_{2m-1} - J_{2m+1}) / m
            let m = k.div_ceil(2);
            let sign = if m.is_multiple_of(2) { T::one() } else { -T::one() };
            sum_y1 = sum_y1 + sign * (cur - odd_above) / T::lit(m as f64);
            odd_above = cur;
        }
        if k == 0 {
            break;
        }
        let below = two * T::lit(k as f64) / x * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > big {
            cur = cur * rescale;
            above = above * rescale;
            odd_above = odd_above * rescale;
            norm = norm * rescale;
            sum_y0 = sum_y0 * rescale;
            sum_y1 = sum_y1 * rescale;
            for v in j.iter_mut() {
                *v = *v * rescale;
            }
        }
    }

    let j = [j[0] / norm, j[1] / norm, j[2] / norm];
    let sum_y0 = sum_y0 / norm;
    let sum_y1 = sum_y1 / norm;
    let pi = T::PI();
    let log_term = (x / two).ln() + T::lit(T::EULER_GAMMA);
    let y0 = two / pi * log_term * j[0] - T::lit(4.0) / pi * sum_y0;
    let y1 = -two / pi * j[0] / x + two / pi * log_term * j[1] + two / pi * sum_y1;
    let y2 = two / x * y1 - y0;
    MillerOut { j, y: [y0, y1, y2] }
}

/// Hankel asymptotic expansion; returns `(J_n(x), Y_n(x))`.
fn hankel<T: Real>(n: u32, x: T) -> (T, T) {
    let mu = T::lit((4 * n * n) as f64);
    let eight_x = T::lit(8.0) * x;
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut last = T::infinity();
    for k in 1..60u32 {
        let odd = T::lit(((2 * k - 1) * (2 * k - 1)) as f64);
        term = term * (mu - odd) / (T::lit(k as f64) * eight_x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        // a_k / x^k enters P for even k (alternating in k/2), Q for odd k
        match k % 4 {
            0 => p = p + term,
            1 => q = q + term,
            2 => p = p - term,
            _ => q = q - term,
        }
        if mag <= T::epsilon() * T::lit(1e-2) {
            break;
        }
    }
    let chi = x - (T::lit(n as f64) / T::lit(2.0) + T::lit(0.25)) * T::PI();
    let amp = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    /// Reference values at 40 digits: x, J0, J1, J2, Y0, Y1, Y2.
    const TABLE: &[[f64; 7]] = &[
        [1e-6, 0.99999999999975, 4.9999999999993747737e-7, 1.2499999999998957202e-13, -8.8690314816594437317, -6.3661977237217504257e+5, -1.2732395447354811113e+12],
        [1e-3, 0.999999750000015625, 4.9999993750000261457e-4, 1.2499998958333366406e-7, -4.4714166113759232557, -636.62216723113941482, -1.2732398630456674272e+6],
        [0.1, 0.997501562066040032, 0.049937526036242000321, 1.248958658799918984e-3, -1.5342386513503668083, -6.4589510947020266377, -127.64478324269015877],
        [0.5, 0.93846980724081290423, 0.24226845767487388638, 0.030604023458682641307, -0.44451873350670655715, -1.4714723926702430692, -5.4413708371742657196],
        [1.0, 0.76519768655796655145, 0.44005058574493351596, 0.11490348493190048047, 0.088256964215676957983, -0.78121282130028871655, -1.6506826068162543911],
        [2.0, 0.22389077914123566805, 0.5767248077568733872, 0.35283402861563771915, 0.5103756726497451196, -0.10703243154093754689, -0.61740810419068266648],
        [3.9, -0.40182601488763990745, -0.027244039620779891184, 0.38785471251800919371, 0.023375908198718963825, 0.4078200195265379037, 0.18576256335335176078],
        [4.0, -0.39714980986384737229, -0.066043328023549136143, 0.36412814585207280421, -0.016940739325064991904, 0.39792571055710000525, 0.21590359460361499453],
        [4.1, -0.38866967983585371972, -0.10327325774733857266, 0.33829248093471294821, -0.056094626606344482014, 0.38459403481891659162, 0.24370147285947454297],
        [7.5, 0.26633965788037839687, 0.13524842757970550518, -0.23027341052579026215, 0.11731328614820863084, -0.2591285104861162518, -0.18641422227783963132],
        [10.0, -0.2459357644513483352, 0.04347274616886143667, 0.25463031368512062253, 0.055671167283599391424, 0.24901542420695388392, -5.8680824422086146398e-3],
        [15.0, -0.014224472826780773234, 0.20510403861352276115, 0.04157167797525047472, 0.20546429603891826479, 0.02107362803687351194, -0.20265447896733512987],
        [24.9, 0.083245968353015490053, -0.13485569953140886933, -0.094077751447907769332, -0.13649918399676523538, -0.086002557595554252479, 0.12959134804531509422],
        [25.0, 0.096266783275958116174, -0.12535024958028990465, -0.10629480324238130855, -0.12724943226800613783, -0.098829964783237410053, 0.11934303508534714503],
        [25.1, 0.10827567149994945198, -0.11463478413442256746, -0.11740991724771220584, -0.1167677076380369472, -0.11062223322783098811, 0.1079531870621141598],
        [40.0, 7.3668905842372895535e-3, 0.12603831803758499921, -1.0649746823580395933e-3, 0.12593641705826092925, -5.7935058215496329412e-3, -0.1262260923493384109],
        [70.0, 0.094908726483013542267, 9.9877887848385151618e-3, -0.094623361089161013262, 9.3096664589409751268e-3, -0.094844652625716247401, -0.012019513676818582195],
        [100.0, 0.019985850304223122424, -0.077145352014112158033, -0.021528757344505365585, -0.077244313365083152254, -0.020372312002759793305, 0.076836867125027956388],
    ];

    #[test]
    fn first_kind_matches_reference_table() {
        for row in TABLE {
            let j = bessel_j012(row[0]);
            for n in 0..3 {
                let err = (j[n] - row[1 + n]).abs();
                assert!(err <= 1e-12, "J{n}({}) err {err:e}", row[0]);
            }
        }
    }

    #[test]
    fn second_kind_matches_reference_table() {
        // absolute error for |Y| <= 1, relative beyond (Y_1, Y_2 blow up at small x)
        for row in TABLE {
            let y = bessel_y012(row[0]);
            for n in 0..3 {
                let want = row[4 + n];
                let err = (y[n] - want).abs() / want.abs().max(1.0);
                assert!(err <= 1e-10, "Y{n}({}) err {err:e}", row[0]);
            }
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn parity_for_negative_argument() {
        for &x in &[0.7, 5.3, 31.0] {
            let p = bessel_j012(x);
            let m = bessel_j012(-x);
            assert_eq!(p[0], m[0]);
            assert_eq!(p[1], -m[1]);
            assert_eq!(p[2], m[2]);
        }
    }

    #[test]
    fn rejects_bad_orders_and_domain() {
        assert!(matches!(bessel_j(3, 1.0), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(bessel_y(5, 1.0), Err(Error::UnsupportedOrder { .. })));
        assert!(matches!(bessel_y(0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_y(1, -2.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain { .. })));
    }

    #[test]
    fn y0_logarithmic_divergence() {
        // Y_0(x) = (2/π)[ln(x/2) + γ] + O(x² ln x); the ratio to the bare
        // logarithm approaches one only as 1 + γ/ln(x/2).
        let lead = |x: f64| 2.0 / std::f64::consts::PI * (x / 2.0).ln();
        let x: f64 = 1e-4;
        let y0 = bessel_y(0, x).unwrap();
        let two_term = lead(x) + 2.0 / std::f64::consts::PI * <f64 as Real>::EULER_GAMMA;
        assert!((y0 - two_term).abs() < 1e-7);
        let ratio = y0 / lead(x);
        assert!((ratio - (1.0 + <f64 as Real>::EULER_GAMMA / (x / 2.0).ln())).abs() < 1e-8);
        let tiny: f64 = 1e-26;
        assert!((bessel_y(0, tiny).unwrap() / lead(tiny) - 1.0).abs() < 0.01);
    }

    #[test]
    fn y2_recurrence_at_one() {
        let [y0, y1, y2] = bessel_y012(1.0f64);
        assert!((y2 - (2.0 * y1 - y0)).abs() < 1e-10);
    }

    #[test]
    fn single_precision_tracks_double() {
        for &x in &[0.3f32, 3.0, 9.0, 18.0, 30.0, 80.0] {
            let (j32, y32) = bessel_jy012(x);
            let (j64, y64) = bessel_jy012(x as f64);
            for n in 0..3 {
                assert!((j32[n] as f64 - j64[n]).abs() < 2e-5, "J{n}({x})");
                assert!(((y32[n] as f64 - y64[n]) / y64[n].abs().max(1.0)).abs() < 2e-5, "Y{n}({x})");
            }
        }
    }
}
