//! The α-Farey map `F_α`, the α-Lüroth map `L_α`, their inverse branches,
//! α-Lüroth digit expansions and the associated codings.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{PartitionSpec, Scalar};

/// How a digit expansion stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    /// The residue reached exactly 0: the point is α-rational.
    Terminated,
    /// Floating-point residue is indistinguishable from an atom boundary;
    /// the digits are those of the α-rational at that boundary.
    MaybeTerminated,
    /// The error bound crossed an atom boundary; no further digit can be
    /// certified.
    PrecisionExhausted,
    /// The requested number of digits was produced.
    Truncated,
}

/// A finite α-Lüroth digit word `[ℓ_1, …, ℓ_k]_α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitWord {
    pub digits: Vec<u64>,
    pub end: Termination,
}

impl DigitWord {
    /// A finite word treated as the expansion of an α-rational.
    pub fn finite(digits: Vec<u64>) -> Self {
        Self { digits, end: Termination::Terminated }
    }

    /// A prefix of an infinite expansion.
    pub fn prefix(digits: Vec<u64>) -> Self {
        Self { digits, end: Termination::Truncated }
    }

    pub fn terminated(&self) -> bool {
        self.end == Termination::Terminated
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Markov coding `⟨x_1, x_2, …⟩_α` over `{0,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FareyCode {
    pub bits: Vec<u8>,
}

impl fmt::Display for FareyCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

/// A cylinder set with its closure endpoints `(left, right)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cylinder<S> {
    pub word: Vec<u64>,
    pub left: S,
    pub right: S,
    pub measure: S,
}

fn check_unit<S: Scalar>(x: &S, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { x >= &S::zero() } else { x > &S::zero() };
    if ok && x <= &S::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("point {:?} outside the unit interval", x.to_f64())))
    }
}

/// `F_α(x)` for `x ∈ [0,1]`.
pub fn farey_map<S: Scalar>(spec: &PartitionSpec, x: &S) -> Result<S> {
    check_unit(x, true)?;
    if x.is_zero() {
        return Ok(S::zero());
    }
    let n = S::locate(spec, x)?;
    if n == 1 {
        return Ok((S::one() - x.clone()) / S::atom(spec, 1)?);
    }
    let a_prev = S::atom(spec, n - 1)?;
    let a = S::atom(spec, n)?;
    Ok(a_prev * (x.clone() - S::tail(spec, n + 1)?) / a + S::tail(spec, n)?)
}

/// `L_α(x)` for `x ∈ [0,1]`.
pub fn luroth_map<S: Scalar>(spec: &PartitionSpec, x: &S) -> Result<S> {
    check_unit(x, true)?;
    if x.is_zero() {
        return Ok(S::zero());
    }
    let n = S::locate(spec, x)?;
    Ok((S::tail(spec, n)? - x.clone()) / S::atom(spec, n)?)
}

/// Inverse branch `F_{α,b}`: `F_{α,1}(x) = 1 - a_1 x` onto `A_1` and
/// `F_{α,0}` mapping `A_n` affinely onto `A_{n+1}`.
pub fn inverse_branch_farey<S: Scalar>(spec: &PartitionSpec, b: u8, x: &S) -> Result<S> {
    check_unit(x, true)?;
    match b {
        1 => Ok(S::one() - S::atom(spec, 1)? * x.clone()),
        0 => {
            if x.is_zero() {
                return Ok(S::zero());
            }
            let n = S::locate(spec, x)?;
            let ratio = S::atom(spec, n + 1)? / S::atom(spec, n)?;
            Ok(ratio * (x.clone() - S::tail(spec, n + 1)?) + S::tail(spec, n + 2)?)
        }
        _ => Err(Error::domain(format!("inverse branch index must be 0 or 1, got {}", b))),
    }
}

/// Inverse branch `L_{α,n}(x) = t_n - a_n x` onto `A_n`.
pub fn inverse_branch_luroth<S: Scalar>(spec: &PartitionSpec, n: u64, x: &S) -> Result<S> {
    check_unit(x, true)?;
    Ok(S::tail(spec, n)? - S::atom(spec, n)? * x.clone())
}

/// Lazy exact α-Lüroth digits of a rational point.
pub struct ExactDigits<'a> {
    spec: &'a PartitionSpec,
    residue: BigRational,
    failed: Option<Error>,
}

impl<'a> ExactDigits<'a> {
    pub fn new(spec: &'a PartitionSpec, x: BigRational) -> Result<Self> {
        check_unit(&x, false)?;
        if !spec.is_exact() {
            return Err(Error::NotExact);
        }
        Ok(Self { spec, residue: x, failed: None })
    }

    /// Current residue `L_α^k(x)`.
    pub fn residue(&self) -> &BigRational {
        &self.residue
    }

    pub fn error(&self) -> Option<&Error> {
        self.failed.as_ref()
    }
}

impl Iterator for ExactDigits<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.residue.is_zero() || self.failed.is_some() {
            return None;
        }
        let step = || -> Result<(u64, BigRational)> {
            let n = self.spec.locate_exact(&self.residue)?;
            let next = (self.spec.tail_exact(n)? - &self.residue) / self.spec.atom_exact(n)?;
            Ok((n, next))
        };
        match step() {
            Ok((n, next)) => {
                self.residue = next;
                Some(n)
            }
            Err(e) => {
                self.failed = Some(e);
                None
            }
        }
    }
}

/// Exact expansion of a rational point, at most `k` digits.
pub fn expand_exact(spec: &PartitionSpec, x: &BigRational, k: usize) -> Result<DigitWord> {
    let mut it = ExactDigits::new(spec, x.clone())?;
    let digits: Vec<u64> = it.by_ref().take(k).collect();
    if let Some(e) = it.error() {
        return Err(e.clone());
    }
    let end = if it.residue().is_zero() { Termination::Terminated } else { Termination::Truncated };
    Ok(DigitWord { digits, end })
}

/// Residues below this absolute uncertainty may be declared α-rational.
const TERMINATION_THRESHOLD: f64 = 1e-10;

/// Floating-point expansion with certified digits.
///
/// Each digit is emitted only if the whole uncertainty interval of the
/// current residue lies in one atom; the residue is recomputed as
/// `(t_n - y)/a_n` and its error bound propagated.
pub fn expand(spec: &PartitionSpec, x: f64, k: usize) -> Result<DigitWord> {
    check_unit(&x, false)?;
    let u = f64::EPSILON;
    let mut y = x;
    let mut err = 0.0f64;
    let mut digits = Vec::new();
    loop {
        if digits.len() >= k {
            return Ok(DigitWord { digits, end: Termination::Truncated });
        }
        if y <= err {
            return Ok(DigitWord { digits, end: Termination::MaybeTerminated });
        }
        let n = spec.locate(y.min(1.0))?;
        let hi = spec.tail(n)?;
        let lo = spec.tail(n + 1).unwrap_or(0.0);
        let d_hi = 4.0 * u * hi;
        let d_lo = 4.0 * u * lo;
        let near_hi = y + err > hi - d_hi && n > 1;
        let near_lo = y - err <= lo + d_lo;
        let (digit, boundary) = match (near_lo, near_hi) {
            (false, false) => (n, None),
            (false, true) => (n, Some(hi)),
            (true, false) => (n + 1, Some(lo)),
            (true, true) => return Ok(DigitWord { digits, end: Termination::PrecisionExhausted }),
        };
        if let Some(b) = boundary {
            if err + 4.0 * u * b <= TERMINATION_THRESHOLD {
                digits.push(digit);
                return Ok(DigitWord { digits, end: Termination::MaybeTerminated });
            }
            return Ok(DigitWord { digits, end: Termination::PrecisionExhausted });
        }
        digits.push(n);
        let a = spec.atom(n)?;
        let next = (hi - y) / a;
        err = (err + 8.0 * u * hi) / a + 8.0 * u * next.abs();
        y = next;
        if y == 0.0 && err == 0.0 {
            return Ok(DigitWord { digits, end: Termination::Terminated });
        }
    }
}

/// Value of `Σ_{i ≤ r} (-1)^{i-1} (Π_{j<i} a_{ℓ_j}) t_{ℓ_i}` followed by
/// `(-1)^r (Π_{j ≤ r} a_{ℓ_j}) · last`.
fn alternating<S: Scalar>(spec: &PartitionSpec, digits: &[u64], last: S) -> Result<S> {
    let mut value = S::zero();
    let mut product = S::one();
    let mut positive = true;
    for &d in digits {
        if d == 0 {
            return Err(Error::domain("digits must be at least 1"));
        }
        let term = product.clone() * S::tail(spec, d)?;
        value = if positive { value + term } else { value - term };
        product = product * S::atom(spec, d)?;
        positive = !positive;
    }
    let term = product * last;
    Ok(if positive { value + term } else { value - term })
}

/// `[ℓ_1, …, ℓ_k]_α = t_{ℓ_1} - a_{ℓ_1} t_{ℓ_2} + a_{ℓ_1} a_{ℓ_2} t_{ℓ_3} - …`.
pub fn assemble<S: Scalar>(spec: &PartitionSpec, digits: &[u64]) -> Result<S> {
    if digits.is_empty() {
        return Err(Error::domain("cannot assemble an empty digit word"));
    }
    alternating(spec, digits, S::zero())
}

/// The `k`-th convergent `r_k = [ℓ_1, …, ℓ_k]_α`.
pub fn convergent<S: Scalar>(spec: &PartitionSpec, word: &DigitWord, k: usize) -> Result<S> {
    if k == 0 || k > word.digits.len() {
        return Err(Error::domain(format!("convergent index {} outside 1..={}", k, word.digits.len())));
    }
    assemble(spec, &word.digits[..k])
}

/// `Π a_{ℓ_i}`: the measure of the cylinder and a bound on `|x - r_k|`.
pub fn cylinder_measure<S: Scalar>(spec: &PartitionSpec, digits: &[u64]) -> Result<S> {
    let mut p = S::one();
    for &d in digits {
        p = p * S::atom(spec, d)?;
    }
    Ok(p)
}

/// The α-Lüroth cylinder `C_α(ℓ_1, …, ℓ_k)`.
pub fn cylinder<S: Scalar>(spec: &PartitionSpec, digits: &[u64]) -> Result<Cylinder<S>> {
    let a: S = assemble(spec, digits)?;
    let mut sibling = digits.to_vec();
    *sibling.last_mut().expect("nonempty") += 1;
    let b: S = assemble(spec, &sibling)?;
    let (left, right) = if a <= b { (a, b) } else { (b, a) };
    Ok(Cylinder { word: digits.to_vec(), left, right, measure: cylinder_measure(spec, digits)? })
}

/// The α-Farey cylinder of a finite bit string `x_1 … x_k`.
pub fn farey_cylinder<S: Scalar>(spec: &PartitionSpec, bits: &[u8]) -> Result<Cylinder<S>> {
    let mut digits = Vec::new();
    let mut zeros = 0u64;
    for &b in bits {
        match b {
            0 => zeros += 1,
            1 => {
                digits.push(zeros + 1);
                zeros = 0;
            }
            _ => return Err(Error::domain("Farey code bits must be 0 or 1")),
        }
    }
    // points whose next digit is at least zeros + 1
    let next_tail = S::tail(spec, zeros + 1)?;
    let far = alternating(spec, &digits, S::zero())?;
    let near = alternating(spec, &digits, next_tail.clone())?;
    let (left, right) = if far <= near { (far, near) } else { (near, far) };
    let measure = cylinder_measure::<S>(spec, &digits)? * next_tail;
    Ok(Cylinder { word: digits, left, right, measure })
}

/// Return time `ρ_α(x) = inf{n ≥ 0 : F_α^n(x) ∈ A_1} + 1`, by iterating `F_α`.
pub fn jump_time<S: Scalar>(spec: &PartitionSpec, x: &S) -> Result<u64> {
    check_unit(x, true)?;
    if x.is_zero() {
        return Err(Error::domain("jump time is undefined at 0"));
    }
    let mut y = x.clone();
    let mut count = 1u64;
    loop {
        if y <= S::zero() {
            return Err(Error::domain("orbit reached 0 before entering A_1"));
        }
        if S::locate(spec, &y)? == 1 {
            return Ok(count);
        }
        y = farey_map(spec, &y)?;
        count += 1;
        if count > 10_000_000 {
            return Err(Error::Range { what: "jump time", n: count });
        }
    }
}

/// Checks `|F_α^{ρ_α(x)}(x) - L_α(x)| ≤ tol` (exact equality for rationals
/// with `tol = 0`).
pub fn jump_identity_check<S: Scalar>(spec: &PartitionSpec, x: &S, tol: f64) -> Result<bool> {
    let rho = jump_time(spec, x)?;
    let mut y = x.clone();
    for _ in 0..rho {
        y = farey_map(spec, &y)?;
    }
    let l = luroth_map(spec, x)?;
    if S::EXACT {
        Ok(y == l || (y.clone() - l).to_f64().abs() <= tol)
    } else {
        Ok((y - l).to_f64().abs() <= tol)
    }
}

/// Farey bits `0^{ℓ_1-1} 1 0^{ℓ_2-1} 1 …`, at most `m` of them.
pub fn farey_code(word: &DigitWord, m: usize) -> FareyCode {
    let mut bits = Vec::with_capacity(m);
    'outer: for &d in &word.digits {
        for _ in 1..d {
            if bits.len() == m {
                break 'outer;
            }
            bits.push(0);
        }
        if bits.len() == m {
            break;
        }
        bits.push(1);
    }
    FareyCode { bits }
}

/// Action of `F_α` on digits: `[ℓ_1 - 1, ℓ_2, …]` for `ℓ_1 ≥ 2`, else
/// `[ℓ_2, …]`.
pub fn farey_shift(word: &DigitWord) -> DigitWord {
    let mut digits = word.digits.clone();
    match digits.first_mut() {
        Some(d) if *d >= 2 => *d -= 1,
        Some(_) => {
            digits.remove(0);
        }
        None => {}
    }
    DigitWord { digits, end: word.end }
}

/// Exact `x` for a finite digit word over an exact partition.
pub fn assemble_exact(spec: &PartitionSpec, digits: &[u64]) -> Result<BigRational> {
    assemble::<BigRational>(spec, digits)
}

/// Parses `p/q`, an integer or a decimal literal into an exact rational.
pub fn parse_point(text: &str) -> Option<BigRational> {
    crate::partition::Param::parse_exact(text).and_then(|p| p.exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::partition::{Family, Param};
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn h() -> PartitionSpec {
        PartitionSpec::harmonic()
    }

    fn d() -> PartitionSpec {
        PartitionSpec::dyadic()
    }

    fn g() -> PartitionSpec {
        PartitionSpec::new(Family::geometric_exact(2, 1, 3)).unwrap()
    }

    fn exact_families() -> Vec<PartitionSpec> {
        vec![
            h(),
            d(),
            g(),
            PartitionSpec::new(Family::Explicit {
                prefix: vec![Param::ratio(1, 3), Param::ratio(1, 5)],
                tail_family: Box::new(Family::Harmonic),
            })
            .unwrap(),
        ]
    }

    #[test]
    fn farey_examples() {
        assert!((farey_map(&d(), &0.3).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(farey_map(&h(), &q(3, 4)).unwrap(), q(1, 2));
        assert_eq!(farey_map(&h(), &0.0).unwrap(), 0.0);
        assert_eq!(farey_map(&g(), &BigRational::zero()).unwrap(), BigRational::zero());
        assert!(farey_map(&h(), &1.5).is_err());
    }

    #[test]
    fn luroth_examples() {
        assert_eq!(luroth_map(&h(), &q(1, 2)).unwrap(), BigRational::zero());
        assert_eq!(luroth_map(&h(), &q(3, 4)).unwrap(), q(1, 2));
        assert!((luroth_map(&d(), &0.3).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(luroth_map(&d(), &q(3, 10)).unwrap(), q(4, 5));
    }

    #[test]
    fn inverse_branch_examples() {
        assert_eq!(inverse_branch_farey(&h(), 1, &BigRational::zero()).unwrap(), BigRational::one());
        assert_eq!(inverse_branch_luroth(&h(), 3, &BigRational::zero()).unwrap(), q(1, 3));
        assert_eq!(inverse_branch_farey(&d(), 0, &BigRational::one()).unwrap(), q(1, 2));
        assert_eq!(inverse_branch_farey(&d(), 0, &BigRational::zero()).unwrap(), BigRational::zero());
        assert!(inverse_branch_farey(&d(), 2, &BigRational::one()).is_err());
    }

    #[test]
    fn inverse_branches_are_right_inverses() {
        for spec in exact_families() {
            for k in 1..40i64 {
                let x = q(k, 41);
                for b in [0u8, 1] {
                    let y = inverse_branch_farey(&spec, b, &x).unwrap();
                    assert_eq!(farey_map(&spec, &y).unwrap(), x);
                }
                for n in 1..6 {
                    let y = inverse_branch_luroth(&spec, n, &x).unwrap();
                    assert_eq!(luroth_map(&spec, &y).unwrap(), x);
                    assert_eq!(spec.locate_exact(&y).unwrap(), n);
                }
            }
        }
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand_exact(&h(), &q(1, 2), 30).unwrap(), DigitWord::finite(vec![2]));
        assert_eq!(expand_exact(&h(), &q(3, 4), 30).unwrap(), DigitWord::finite(vec![1, 2]));
        assert_eq!(expand_exact(&d(), &BigRational::one(), 30).unwrap(), DigitWord::finite(vec![1]));
        let w = expand(&h(), 0.5, 30).unwrap();
        assert_eq!(w.digits, vec![2]);
        assert!(matches!(w.end, Termination::MaybeTerminated | Termination::Terminated));
        let w = expand(&h(), 0.75, 30).unwrap();
        assert_eq!(w.digits, vec![1, 2]);
        assert!(w.end != Termination::PrecisionExhausted);
        assert_eq!(expand(&d(), 1.0, 5).unwrap().digits, vec![1]);
    }

    #[test]
    fn float_expansion_stops_honestly() {
        // an irrational-looking point: digits must match the exact expansion
        // of the same binary float until the float backend gives up
        for spec in exact_families() {
            for &x in &[0.123456789, 0.987654321, std::f64::consts::FRAC_1_SQRT_2, 0.3] {
                let w = expand(&spec, x, 200).unwrap();
                let exact = expand_exact(&spec, &BigRational::from_float(x).unwrap(), w.len()).unwrap();
                if w.end == Termination::MaybeTerminated {
                    let k = w.len() - 1;
                    assert_eq!(w.digits[..k], exact.digits[..k]);
                } else {
                    assert_eq!(w.digits, exact.digits, "{} at {x}", spec.family());
                }
                assert!(w.len() < 200);
            }
        }
    }

    #[test]
    fn assemble_examples() {
        assert_eq!(assemble_exact(&h(), &[1, 2]).unwrap(), q(3, 4));
        assert_eq!(assemble_exact(&h(), &[1, 1, 1]).unwrap(), q(3, 4));
        for spec in exact_families() {
            assert_eq!(assemble_exact(&spec, &[1]).unwrap(), BigRational::one());
        }
        assert!(assemble::<f64>(&h(), &[]).is_err());
    }

    #[test]
    fn convergent_examples() {
        let w = DigitWord::prefix(vec![2, 2, 2, 2]);
        assert_eq!(convergent::<BigRational>(&h(), &w, 1).unwrap(), q(1, 2));
        let w = DigitWord::finite(vec![1, 2]);
        assert_eq!(convergent::<BigRational>(&h(), &w, 2).unwrap(), q(3, 4));
        assert!(convergent::<f64>(&h(), &w, 3).is_err());
    }

    #[test]
    fn cylinder_examples() {
        let c = cylinder::<BigRational>(&h(), &[1]).unwrap();
        assert_eq!((c.left, c.right, c.measure), (q(1, 2), BigRational::one(), q(1, 2)));
        assert_eq!(cylinder::<BigRational>(&h(), &[1, 2]).unwrap().measure, q(1, 12));
        assert_eq!(cylinder::<BigRational>(&d(), &[1, 1, 1]).unwrap().measure, q(1, 8));
        for spec in exact_families() {
            let c = cylinder::<BigRational>(&spec, &[2, 3, 1]).unwrap();
            assert_eq!(c.right - c.left, c.measure);
        }
    }

    #[test]
    fn jump_time_examples() {
        assert_eq!(jump_time(&h(), &q(3, 4)).unwrap(), 1);
        assert_eq!(jump_time(&h(), &q(1, 3)).unwrap(), 3);
        assert_eq!(jump_time(&d(), &0.3).unwrap(), 2);
        assert_eq!(jump_time(&d(), &q(3, 10)).unwrap(), 2);
        assert!(jump_time(&h(), &BigRational::zero()).is_err());
    }

    #[test]
    fn jump_identity_examples() {
        assert!(jump_identity_check(&h(), &q(3, 4), 0.0).unwrap());
        assert!(jump_identity_check(&d(), &0.3, 1e-12).unwrap());
        assert!(jump_identity_check(&d(), &q(3, 10), 0.0).unwrap());
        assert!(jump_identity_check(&g(), &q(1, 5), 0.0).unwrap());
    }

    #[test]
    fn coding_examples() {
        assert_eq!(farey_code(&DigitWord::finite(vec![2, 1]), 10).bits, vec![0, 1, 1]);
        assert_eq!(farey_code(&DigitWord::finite(vec![3, 2]), 4).bits, vec![0, 0, 1, 0]);
        assert_eq!(farey_shift(&DigitWord::prefix(vec![3, 2, 7])).digits, vec![2, 2, 7]);
        assert_eq!(farey_shift(&DigitWord::prefix(vec![1, 5, 7])).digits, vec![5, 7]);
    }

    #[test]
    fn double_expansion_identity() {
        for spec in exact_families() {
            for word in [vec![1u64], vec![2, 3], vec![4, 1, 2], vec![1, 1, 5, 2]] {
                let mut a = word.clone();
                a.push(1);
                let mut b = word.clone();
                *b.last_mut().unwrap() += 1;
                assert_eq!(assemble_exact(&spec, &a).unwrap(), assemble_exact(&spec, &b).unwrap());
            }
        }
    }

    fn compositions(n: u64) -> Vec<Vec<u64>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for mut rest in compositions(n - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn locate_of_assembled_words() {
        for spec in exact_families() {
            for total in 1..=12 {
                for word in compositions(total) {
                    if *word.last().unwrap() == 1 {
                        continue;
                    }
                    let x = assemble_exact(&spec, &word).unwrap();
                    assert_eq!(spec.locate_exact(&x).unwrap(), word[0]);
                    assert_eq!(expand_exact(&spec, &x, 64).unwrap().digits, word);
                }
            }
            for word in compositions(20).into_iter().step_by(97).filter(|w| *w.last().unwrap() > 1) {
                let x = assemble_exact(&spec, &word).unwrap();
                assert_eq!(spec.locate_exact(&x).unwrap(), word[0]);
            }
        }
    }

    #[test]
    fn farey_cylinders_tile_the_interval() {
        for spec in exact_families() {
            for k in 1..=10usize {
                let mut cells: Vec<Cylinder<BigRational>> = (0..1u32 << k)
                    .map(|code| {
                        let bits: Vec<u8> = (0..k).map(|i| ((code >> (k - 1 - i)) & 1) as u8).collect();
                        farey_cylinder(&spec, &bits).unwrap()
                    })
                    .collect();
                cells.sort_by(|a, b| a.left.cmp(&b.left));
                assert_eq!(cells[0].left, BigRational::zero());
                assert_eq!(cells.last().unwrap().right, BigRational::one());
                for pair in cells.windows(2) {
                    assert_eq!(pair[0].right, pair[1].left);
                }
                let total = cells.iter().fold(BigRational::zero(), |acc, c| acc + &c.measure);
                assert_eq!(total, BigRational::one());
                for c in &cells {
                    assert_eq!(&c.right - &c.left, c.measure);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn shift_identity(p in 1i64..100_000, extra in 0i64..100_000, which in 0usize..4) {
            let d = p + extra;
            let spec = &exact_families()[which];
            let x = q(p, d);
            let full = expand_exact(spec, &x, 40).unwrap();
            let lx = luroth_map(spec, &x).unwrap();
            if lx.is_zero() {
                prop_assert_eq!(full.digits.len(), 1);
            } else {
                let shifted = expand_exact(spec, &lx, 39).unwrap();
                prop_assert_eq!(&shifted.digits[..], &full.digits[1..]);
            }
        }

        #[test]
        fn jump_identity_random(p in 1i64..100_000, extra in 0i64..100_000, which in 0usize..4) {
            let d = p + extra;
            let spec = &exact_families()[which];
            prop_assert!(jump_identity_check(spec, &q(p, d), 0.0).unwrap());
            let x = p as f64 / d as f64;
            prop_assert!(jump_identity_check(spec, &x, 1e-12).unwrap());
        }

        #[test]
        fn convergents_approach(p in 1i64..1_000_000, extra in 0i64..1_000_000) {
            let d = p + extra;
            let spec = h();
            let x = q(p, d);
            let w = expand_exact(&spec, &x, 20).unwrap();
            for k in 1..=w.len() {
                let r = convergent::<BigRational>(&spec, &w, k).unwrap();
                let bound = cylinder_measure::<BigRational>(&spec, &w.digits[..k]).unwrap();
                let diff = if x >= r { &x - &r } else { &r - &x };
                prop_assert!(diff <= bound);
            }
        }
    }
}
