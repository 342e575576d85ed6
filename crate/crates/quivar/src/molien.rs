//! Exact Molien series of enumerated matrix groups, plus expansion of
//! closed product forms 1/Π(1-t^d)^e for comparison.

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::group::Closure;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

/// Truncated Molien series with verified nonnegative integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolienSeries {
    pub coefficients: Vec<BigInt>,
    pub group_order: u64,
}

/// numerator / Π (1 - t^d)^e
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub numerator: Vec<BigInt>,
    pub denominator_factors: Vec<(usize, usize)>,
}

/// Series inverse of det(I - tA) to order `order`, given the
/// polynomial's coefficients `a` (a[0] = 1).
fn invert_series(a: &[CycNum], order: usize) -> Vec<CycNum> {
    let mut b = vec![CycNum::zero(); order + 1];
    b[0] = CycNum::one();
    for k in 1..=order {
        let mut acc = CycNum::zero();
        for j in 1..a.len().min(k + 1) {
            if !a[j].is_zero() {
                acc = &acc + &(&a[j] * &b[k - j]);
            }
        }
        b[k] = -&acc;
    }
    b
}

/// Molien series 1/|G| Σ_σ 1/det(I - tσ), exact to order `order`.
/// Every coefficient is checked to be a nonnegative integer.
pub fn molien_series(group: &Closure, order: usize) -> Result<MolienSeries> {
    let n = group.order() as usize;
    let zero_series = || vec![CycNum::zero(); order + 1];
    let total: Vec<CycNum> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let e = group.element(idx);
            let char_rev = e.char_rev()?;
            Ok(invert_series(&char_rev, order))
        })
        .try_reduce(zero_series, |mut acc, s| {
            for (a, b) in acc.iter_mut().zip(&s) {
                *a = &*a + b;
            }
            Ok(acc)
        })?;
    let scale = CycNum::from_ratio(1, n as i64);
    let mut coefficients = Vec::with_capacity(order + 1);
    for (d, c) in total.iter().enumerate() {
        let v = c * &scale;
        let r = v
            .to_rational()
            .ok_or(Error::NonIntegralCoefficient { degree: d })?;
        if !r.is_integer() || r.numer().is_negative() {
            return Err(Error::NonIntegralCoefficient { degree: d });
        }
        coefficients.push(r.to_integer());
    }
    Ok(MolienSeries {
        coefficients,
        group_order: n as u64,
    })
}

/// Expand numerator / Π (1-t^d)^e to order `order` by repeated
/// stride-d prefix sums.
pub fn expand_closed_form(form: &ClosedForm, order: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); order + 1];
    for (d, c) in form.numerator.iter().enumerate() {
        if d <= order {
            s[d] = c.clone();
        }
    }
    for &(d, e) in &form.denominator_factors {
        for _ in 0..e {
            for k in d..=order {
                let prev = s[k - d].clone();
                s[k] += prev;
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolienComparison {
    pub matches: bool,
    pub first_mismatch: Option<(usize, BigInt, BigInt)>,
}

/// Coefficient-wise comparison of a computed series against a closed
/// form; reports the first (index, computed, expected) mismatch.
pub fn molien_compare(series: &MolienSeries, form: &ClosedForm, order: usize) -> MolienComparison {
    let expanded = expand_closed_form(form, order);
    for d in 0..=order.min(series.coefficients.len() - 1) {
        if series.coefficients[d] != expanded[d] {
            return MolienComparison {
                matches: false,
                first_mismatch: Some((d, series.coefficients[d].clone(), expanded[d].clone())),
            };
        }
    }
    MolienComparison {
        matches: true,
        first_mismatch: None,
    }
}

pub fn degrees_product(degrees: &[u64]) -> BigInt {
    degrees.iter().fold(BigInt::one(), |acc, &d| acc * d)
}

/// Parse "1-t^4+t^8 / (1-t^6)(1-t^8)" or just "(1-t^8)(1-t^12)" with an
/// implicit numerator of 1.  Denominator factors may carry an exponent:
/// "(1-t^2)^3".
pub fn parse_closed_form(text: &str) -> Result<ClosedForm> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (num_part, den_part) = match compact.split_once('/') {
        Some((n, d)) => (n.to_string(), d.to_string()),
        None => ("1".to_string(), compact),
    };
    let numerator = parse_int_poly(&num_part)?;
    if numerator.is_empty() || !numerator[0].is_one() {
        return Err(Error::Parse(format!(
            "closed-form numerator must have constant term 1: {num_part}"
        )));
    }
    let mut denominator_factors: Vec<(usize, usize)> = Vec::new();
    let bytes = den_part.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(Error::Parse(format!("expected '(' in {den_part}")));
        }
        let close = den_part[pos..]
            .find(')')
            .map(|o| pos + o)
            .ok_or_else(|| Error::Parse(format!("unbalanced '(' in {den_part}")))?;
        let inner = &den_part[pos + 1..close];
        let degree = inner
            .strip_prefix("1-t")
            .map(|rest| {
                if rest.is_empty() {
                    Ok(1usize)
                } else {
                    rest.strip_prefix('^')
                        .ok_or_else(|| Error::Parse(format!("bad factor ({inner})")))?
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad factor ({inner})")))
                }
            })
            .transpose()?
            .ok_or_else(|| Error::Parse(format!("bad factor ({inner})")))?;
        pos = close + 1;
        let mut exponent = 1usize;
        if pos < bytes.len() && bytes[pos] == b'^' {
            let end = den_part[pos + 1..]
                .find(|c: char| !c.is_ascii_digit())
                .map(|o| pos + 1 + o)
                .unwrap_or(den_part.len());
            exponent = den_part[pos + 1..end]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {den_part}")))?;
            pos = end;
        }
        denominator_factors.push((degree, exponent));
    }
    if denominator_factors.is_empty() {
        return Err(Error::Parse("closed form needs at least one factor".into()));
    }
    denominator_factors.sort();
    Ok(ClosedForm {
        numerator,
        denominator_factors,
    })
}

/// Parse an expanded integer polynomial in t such as "1-t^4+33t^8".
fn parse_int_poly(text: &str) -> Result<Vec<BigInt>> {
    let mut coeffs: Vec<BigInt> = Vec::new();
    let set = |deg: usize, c: BigInt, coeffs: &mut Vec<BigInt>| {
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, BigInt::zero());
        }
        coeffs[deg] = &coeffs[deg] + c;
    };
    let bytes = text.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = 1i64;
        while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff: BigInt = if start == pos {
            BigInt::one()
        } else {
            text[start..pos].parse().map_err(|_| Error::Parse(text.into()))?
        } * sign;
        let mut degree = 0usize;
        if pos < bytes.len() && bytes[pos] == b't' {
            pos += 1;
            degree = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let dstart = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                degree = text[dstart..pos]
                    .parse()
                    .map_err(|_| Error::Parse(text.into()))?;
            }
        } else if start == pos {
            return Err(Error::Parse(format!("dangling sign in {text}")));
        }
        set(degree, coeff, &mut coeffs);
    }
    if coeffs.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure;
    use crate::matrix::CycMatrix;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn trivial_group_gives_binomial_coefficients() {
        let g = closure(&[CycMatrix::identity(2)], 10).unwrap();
        let ms = molien_series(&g, 6).unwrap();
        // 1/(1-t)^2: coefficient of t^d is d+1.
        assert_eq!(ms.coefficients, ints(&[1, 2, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn sign_group_keeps_even_degrees() {
        let minus = CycMatrix::identity(2).scalar_mul(&crate::cyclo::CycNum::from_int(-1));
        let g = closure(&[minus], 10).unwrap();
        let ms = molien_series(&g, 5).unwrap();
        // 1/2 (1/(1-t)^2 + 1/(1+t)^2): 1, 0, 3, 0, 5, 0.
        assert_eq!(ms.coefficients, ints(&[1, 0, 3, 0, 5, 0]));
    }

    #[test]
    fn closed_form_expansion_matches_partition_counts() {
        let f = parse_closed_form("(1-t^8)(1-t^12)").unwrap();
        let s = expand_closed_form(&f, 24);
        assert_eq!(s[0], BigInt::from(1));
        assert_eq!(s[8], BigInt::from(1));
        assert_eq!(s[12], BigInt::from(1));
        assert_eq!(s[16], BigInt::from(1));
        assert_eq!(s[20], BigInt::from(1));
        assert_eq!(s[24], BigInt::from(2));
        for d in [1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 13, 14, 15, 17, 18, 19, 21, 22, 23] {
            assert_eq!(s[d], BigInt::from(0), "degree {d}");
        }
    }

    #[test]
    fn numerator_terms_shift_the_expansion() {
        let f = parse_closed_form("1-t^4+t^8 / (1-t^6)(1-t^8)").unwrap();
        let s = expand_closed_form(&f, 8);
        assert_eq!(s[4], BigInt::from(-1));
        let ones = parse_closed_form("(1-t)").unwrap();
        assert_eq!(expand_closed_form(&ones, 4), ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn comparison_reports_first_mismatch() {
        let g = closure(&[CycMatrix::identity(1)], 10).unwrap();
        let ms = molien_series(&g, 6).unwrap();
        let f = parse_closed_form("(1-t)(1-t^3)").unwrap();
        let cmp = molien_compare(&ms, &f, 6);
        assert!(!cmp.matches);
        // 1/(1-t) vs 1/((1-t)(1-t^3)) first differ at t^3: 1 vs 2.
        assert_eq!(cmp.first_mismatch, Some((3, BigInt::from(1), BigInt::from(2))));
        let right = parse_closed_form("(1-t)").unwrap();
        assert!(molien_compare(&ms, &right, 6).matches);
    }

    #[test]
    fn degree_products() {
        assert_eq!(degrees_product(&[2, 8, 12, 14, 18, 20, 24, 30]), BigInt::from(696729600u64));
        assert_eq!(degrees_product(&[8, 12, 20, 24]), BigInt::from(46080));
        assert_eq!(degrees_product(&[8, 24]), BigInt::from(192));
        assert_eq!(degrees_product(&[4, 6]), BigInt::from(24));
    }

    #[test]
    fn parser_rejects_malformed_forms() {
        assert!(parse_closed_form("(1+t^4)").is_err());
        assert!(parse_closed_form("t^4 / (1-t^2)").is_err());
        assert!(parse_closed_form("").is_err());
        assert!(parse_closed_form("2 / (1-t^2)").is_err());
    }
}
