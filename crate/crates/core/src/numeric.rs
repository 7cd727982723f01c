//! Certified complex embedding of cyclotomic values.
//!
//! `embed_complex(x, digits)` evaluates x under zeta_n -> exp(2 pi i / n) and
//! returns an (re, im) pair with each coordinate within 10^-digits of the
//! exact value.  Everything up to the final f64 conversion is exact rational
//! arithmetic: pi comes from a Machin series with an alternating-series
//! remainder bound, cosines and sines from Taylor series after exact quadrant
//! reduction, and the conversion error is checked against the remaining
//! budget, so the guarantee is rigorous rather than heuristic.

use crate::config::Limits;
use crate::cyclo::{CycloNum, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn rat_u(n: u64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn pow10(m: u32) -> BigInt {
    BigInt::from(10u32).pow(m)
}

/// floor(r * 10^m) / 10^m; introduces an error in [0, 10^-m).
fn round_fixed(r: &Rat, m: u32) -> Rat {
    let scale = pow10(m);
    let scaled = r * Rat::from_integer(scale.clone());
    Rat::new(scaled.floor().to_integer(), scale)
}

/// arctan(1/x) with truncation error < eps (alternating series).
fn arctan_inv(x: u64, eps: &Rat) -> Rat {
    let x2 = rat_u(x * x);
    let mut power = Rat::one() / rat_u(x);
    let mut sum = Rat::zero();
    let mut k = 0u64;
    loop {
        let term = &power / rat_u(2 * k + 1);
        if term < *eps {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = power / &x2;
        k += 1;
        assert!(k < 10_000, "arctan series did not converge");
    }
    sum
}

/// pi as a fixed-point rational with error < 10^-(m-1).
fn pi_fixed(m: u32) -> Rat {
    let eps = Rat::new(BigInt::one(), pow10(m + 2));
    // Machin: pi = 16 arctan(1/5) - 4 arctan(1/239).
    let pi = arctan_inv(5, &(eps.clone() / rat_u(32))) * rat_u(16)
        - arctan_inv(239, &(eps / rat_u(8))) * rat_u(4);
    // Truncation above < eps/2 + eps/2 = eps; rounding adds < 10^-m.
    round_fixed(&pi, m)
}

/// cos(x) for rational 0 <= x <= 1.6 with truncation error < eps.
fn cos_taylor(x: &Rat, eps: &Rat) -> Rat {
    let x2 = x * x;
    let mut sum = Rat::one();
    let mut term = Rat::one();
    let mut k = 0u64;
    loop {
        k += 1;
        term = term * &x2 / rat_u((2 * k - 1) * (2 * k));
        // Terms decrease for x <= 1.6 from k = 1 on, so the first omitted
        // term bounds the remainder.
        if term < *eps {
            return sum;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        assert!(k < 10_000, "cos series did not converge");
    }
}

/// sin(x) for rational 0 <= x <= 1.6 with truncation error < eps.
fn sin_taylor(x: &Rat, eps: &Rat) -> Rat {
    let x2 = x * x;
    let mut sum = x.clone();
    let mut term = x.clone();
    let mut k = 0u64;
    loop {
        k += 1;
        term = term * &x2 / rat_u((2 * k) * (2 * k + 1));
        if term < *eps {
            return sum;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        assert!(k < 10_000, "sin series did not converge");
    }
}

/// (cos, sin) of pi * r for rational r, each within eps of the true value.
/// Argument reduction is exact on r; only the final [0, 1/2) piece is
/// approximated.
fn cos_sin_pi_times(r: &Rat, eps: &Rat, fixed_digits: u32) -> (Rat, Rat) {
    let two = rat_u(2);
    let mut r = r.clone() - (r / &two).floor() * &two; // r mod 2 in [0, 2)
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let mut quadrant = 0u8;
    while r >= half {
        r -= &half;
        quadrant += 1;
    }
    debug_assert!(quadrant < 4);
    let pi = pi_fixed(fixed_digits);
    // |x - pi r| <= r * pi_err + rounding < 2 * 10^-fixed_digits.
    let x = round_fixed(&(&pi * &r), fixed_digits);
    let eps_t = eps.clone() / rat_u(2);
    let c = cos_taylor(&x, &eps_t);
    let s = sin_taylor(&x, &eps_t);
    match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// Decimal digit count of ceil(|r|) + 1, used to size error budgets.
fn decimal_magnitude(r: &Rat) -> u32 {
    let n = r.abs().ceil().to_integer();
    n.to_string().len() as u32 + 1
}

/// Convert a (possibly huge-denominator) rational to f64 with absolute error
/// at most |r| * 2^-53 + 2^-60.  `Ratio::to_f64` is not used because it can
/// overflow to NaN on large numerators.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let neg = r.is_negative();
    let abs = r.abs();
    let scaled = (&abs * Rat::from_integer(BigInt::one() << 60)).floor().to_integer();
    let v = scaled.to_f64().unwrap_or(f64::INFINITY) / (1u64 << 60) as f64;
    if neg {
        -v
    } else {
        v
    }
}

/// Evaluate x at zeta_n = exp(2 pi i / n).  Both returned coordinates are
/// within 10^-digits of the exact embedding; errors out if `digits` exceeds
/// the configured cap or if the value's magnitude leaves no room for the f64
/// conversion inside the budget.
pub fn embed_complex(x: &CycloNum, digits: u32, limits: &Limits) -> Result<(f64, f64)> {
    if digits == 0 || digits > limits.max_embed_digits {
        return Err(Error::BoundExceeded(format!(
            "embedding digits {} outside 1..={}",
            digits, limits.max_embed_digits
        )));
    }
    let eps_total = Rat::new(BigInt::one(), pow10(digits));
    let budget_rat = eps_total.clone() / rat_u(4);
    let sum_abs: Rat = x.coeffs().iter().map(|c| c.abs()).sum::<Rat>() + Rat::one();
    let eps_trig = budget_rat / &sum_abs;
    // Fixed-point precision for pi and arguments: small enough that the
    // 2*10^-m argument error is far below eps_trig.
    let m = digits + 12 + decimal_magnitude(&sum_abs);
    let n = x.order();
    let mut re = Rat::zero();
    let mut im = Rat::zero();
    for (i, a) in x.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // zeta_n^i = exp(pi i * (2 i / n)).
        let r = Rat::new(BigInt::from(2 * i as u64), BigInt::from(n));
        let (c, s) = cos_sin_pi_times(&r, &eps_trig, m);
        re += a * c;
        im += a * s;
    }
    // Check the f64 conversion fits in the remaining budget.
    let conv_bound = (re.abs() + im.abs() + rat_u(2)) * Rat::new(BigInt::one(), BigInt::one() << 52);
    if conv_bound >= eps_total / rat_u(2) {
        return Err(Error::BoundExceeded(format!(
            "value magnitude too large for {digits} certified digits"
        )));
    }
    Ok((rat_to_f64(&re), rat_to_f64(&im)))
}

/// |x| as an f64 with error < 10^-digits-ish; helper for report output and
/// inequality checks with explicit tolerances.
pub fn abs_complex(x: &CycloNum, digits: u32, limits: &Limits) -> Result<f64> {
    let (re, im) = embed_complex(x, digits, limits)?;
    Ok(re.hypot(im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn embed_unity_roots() {
        let l = limits();
        let (re, im) = embed_complex(&CycloNum::from_int(-1), 10, &l).unwrap();
        assert!((re + 1.0).abs() < 1e-10 && im.abs() < 1e-10);

        let i = CycloNum::root_of_unity(4, 1).unwrap();
        let (re, im) = embed_complex(&i, 10, &l).unwrap();
        assert!(re.abs() < 1e-10 && (im - 1.0).abs() < 1e-10);

        // zeta_3 = (-1/2, sqrt(3)/2); frozen reference 0.8660254038.
        let z3 = CycloNum::root_of_unity(3, 1).unwrap();
        let (re, im) = embed_complex(&z3, 10, &l).unwrap();
        assert!((re + 0.5).abs() < 1e-10);
        assert!((im - 0.8660254038).abs() < 1e-9);
    }

    #[test]
    fn embed_is_multiplicative_numerically() {
        let l = limits();
        let a = CycloNum::root_of_unity(8, 1)
            .unwrap()
            .add(&CycloNum::from_int(2))
            .unwrap();
        let b = CycloNum::root_of_unity(3, 2)
            .unwrap()
            .sub(&CycloNum::from_int(1))
            .unwrap();
        let (ar, ai) = embed_complex(&a, 12, &l).unwrap();
        let (br, bi) = embed_complex(&b, 12, &l).unwrap();
        let prod = a.mul(&b).unwrap();
        let (pr, pi) = embed_complex(&prod, 12, &l).unwrap();
        assert!((pr - (ar * br - ai * bi)).abs() < 1e-8);
        assert!((pi - (ar * bi + ai * br)).abs() < 1e-8);
    }

    #[test]
    fn digits_cap_enforced() {
        let l = limits();
        let x = CycloNum::one();
        assert!(embed_complex(&x, 13, &l).is_err());
        assert!(embed_complex(&x, 0, &l).is_err());
    }
}
