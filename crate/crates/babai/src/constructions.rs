//! Constructive colorings of the line, product colorings, and the parity
//! lemma behind bipartiteness of single-distance graphs on rational points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solver::Coloring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red = 0,
    Blue = 1,
    Green = 2,
}

impl Color {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Three-coloring of the line forbidding two distances s1 <= s2. The line is
/// cut into half-open blocks of length s2; each block is cut into m
/// subintervals of length s1 plus a remainder of length a, where
/// s2 = m*s1 + a with 0 <= a < s1. Each block uses two alternating colors,
/// the pair rotating with the block index mod 3.
#[derive(Clone, Debug)]
pub struct LineColoringScheme {
    pub s1: Rational,
    pub s2: Rational,
    pub m: BigInt,
    pub a: Rational,
    pub degenerate: bool,
    pairs: [[Color; 2]; 3],
}

const DEFAULT_PAIRS: [[Color; 2]; 3] = [
    [Color::Red, Color::Blue],
    [Color::Green, Color::Red],
    [Color::Blue, Color::Green],
];

impl LineColoringScheme {
    pub fn new(s1: Rational, s2: Rational) -> Result<Self> {
        if !s1.is_positive() {
            return Err(Error::Precondition("s1 must be positive".into()));
        }
        if &s2 < &s1 {
            return Err(Error::Precondition("require s1 <= s2".into()));
        }
        let degenerate = s1 == s2;
        let (m, a) = if degenerate {
            (BigInt::from(1), Rational::zero())
        } else {
            let m = (&s2 / &s1).floor_int();
            let a = &s2 - &(&rat(&m) * &s1);
            (m, a)
        };
        Ok(LineColoringScheme {
            s1,
            s2,
            m,
            a,
            degenerate,
            pairs: DEFAULT_PAIRS,
        })
    }

    /// Overrides the color pair used for blocks with index ≡ `residue` mod 3.
    /// Exists for mutation testing of the verifier; not reachable from the CLI.
    pub fn override_pair(&mut self, residue: usize, pair: [Color; 2]) {
        self.pairs[residue % 3] = pair;
    }

    pub fn eval(&self, x: &Rational) -> Color {
        if self.degenerate {
            let idx = (x / &self.s1).floor_int();
            return if idx.mod_floor(&BigInt::from(2)).is_zero() {
                Color::Red
            } else {
                Color::Blue
            };
        }
        let n = (x / &self.s2).floor_int();
        let t = x - &(&rat(&n) * &self.s2);
        let m_s1 = &rat(&self.m) * &self.s1;
        let j = if &t < &m_s1 {
            (&t / &self.s1).floor_int()
        } else {
            self.m.clone()
        };
        let p = j.mod_floor(&BigInt::from(2)).to_usize().unwrap();
        let block = n.mod_floor(&BigInt::from(3)).to_usize().unwrap();
        self.pairs[block][p]
    }

    /// All subinterval boundary points within [-range, range].
    pub fn boundaries(&self, range: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        let period = if self.degenerate { &self.s1 } else { &self.s2 };
        let n_lo = (&-range / period).floor_int();
        let n_hi = (range / period).floor_int();
        let mut n = n_lo;
        while n <= n_hi {
            let base = &rat(&n) * period;
            if self.degenerate {
                out.push(base.clone());
            } else {
                let mut q = BigInt::zero();
                while q <= self.m {
                    let b = &base + &(&rat(&q) * &self.s1);
                    if &b.abs() <= range {
                        out.push(b);
                    }
                    q += 1;
                }
            }
            n += 1;
        }
        out.sort();
        out.dedup();
        out
    }
}

fn rat(n: &BigInt) -> Rational {
    Rational::new(n.clone(), BigInt::from(1))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeViolation {
    pub x: Rational,
    pub shift: Rational,
    pub color: Color,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub violations: Vec<SchemeViolation>,
    pub samples: usize,
    pub boundary_points: usize,
}

/// Checks color(x) != color(x + s) for s in {s1, s2} over seeded random
/// rationals in [-range, range] plus a deterministic sweep of every interval
/// boundary and boundary -/+ epsilon. Boundary coverage matters: off-by-one
/// mistakes in the remainder interval only show up there.
pub fn verify_line_scheme(
    scheme: &LineColoringScheme,
    samples: usize,
    range: &Rational,
    seed: u64,
) -> VerificationReport {
    let mut violations = Vec::new();
    let mut check = |x: &Rational| {
        let c = scheme.eval(x);
        let shifts: &[&Rational] = if scheme.degenerate {
            &[&scheme.s1]
        } else {
            &[&scheme.s1, &scheme.s2]
        };
        for &s in shifts {
            let shifted = scheme.eval(&(x + s));
            if shifted == c {
                violations.push(SchemeViolation {
                    x: x.clone(),
                    shift: s.clone(),
                    color: c,
                });
            }
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let den: i64 = rng.gen_range(1..=64);
        let bound = (range * &Rational::from_int(den)).floor_int();
        let bound = bound.to_i64().unwrap_or(i64::MAX / 2).max(1);
        let num: i64 = rng.gen_range(-bound..=bound);
        check(&(&Rational::from_int(num) / &Rational::from_int(den)));
    }

    let eps = &scheme.s1 / &Rational::from_int(1000);
    let boundaries = scheme.boundaries(range);
    let boundary_points = boundaries.len();
    for b in &boundaries {
        check(b);
        check(&(b - &eps));
        check(&(b + &eps));
    }

    VerificationReport {
        violations,
        samples,
        boundary_points,
    }
}

/// Pairs two colorings of the same vertex set: color of v becomes
/// c1[v] * c2.color_count + c2[v]. Valid for the union of the two forbidden
/// sets whenever each factor is valid for its own.
pub fn product_coloring(c1: &Coloring, c2: &Coloring) -> Result<Coloring> {
    if c1.assignment.len() != c2.assignment.len() {
        return Err(Error::VertexMismatch(
            c1.assignment.len(),
            c2.assignment.len(),
        ));
    }
    let r = c2.color_count.max(1);
    let assignment: Vec<usize> = c1
        .assignment
        .iter()
        .zip(&c2.assignment)
        .map(|(&a, &b)| a * r + b)
        .collect();
    Ok(Coloring {
        assignment,
        color_count: c1.color_count.max(1) * r,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityVerdict {
    pub a_odd: bool,
    pub b_odd: bool,
    pub c_odd: bool,
}

impl ParityVerdict {
    pub fn all_odd(&self) -> bool {
        self.a_odd && self.b_odd && self.c_odd
    }
}

/// Reports the parities of a primitive solution of q(a^2 + b^2) = 2p c^2 with
/// p, q odd. The lemma asserts all three are odd; this recomputes so the
/// property test can falsify a broken enumeration.
pub fn check_odd_parity_solution(
    a: i64,
    b: i64,
    c: i64,
    p: i64,
    q: i64,
) -> Result<ParityVerdict> {
    if c <= 0 {
        return Err(Error::Precondition("c must be positive".into()));
    }
    if p <= 0 || p % 2 == 0 || q <= 0 || q % 2 == 0 {
        return Err(Error::Precondition("p, q must be odd and positive".into()));
    }
    let g = gcd3(a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs());
    if g != 1 {
        return Err(Error::Precondition(format!("gcd(a,b,c) = {g}, expected 1")));
    }
    let lhs = BigInt::from(q) * (BigInt::from(a) * a + BigInt::from(b) * b);
    let rhs = BigInt::from(2) * p * BigInt::from(c) * c;
    if lhs != rhs {
        return Err(Error::Precondition(format!(
            "q(a^2+b^2) = {lhs} != 2pc^2 = {rhs}"
        )));
    }
    Ok(ParityVerdict {
        a_odd: a.rem_euclid(2) == 1,
        b_odd: b.rem_euclid(2) == 1,
        c_odd: c.rem_euclid(2) == 1,
    })
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    a.gcd(&b).gcd(&c)
}

/// All primitive solutions of q(a^2 + b^2) = 2p c^2 with a >= b >= 0,
/// 0 < c <= c_max, gcd(a, b, c) = 1, by exhaustive search. The empty list is
/// a legitimate outcome: the distance sqrt(2p/q) need not be realized.
pub fn enumerate_odd_parity_solutions(p: i64, q: i64, c_max: i64) -> Result<Vec<(i64, i64, i64)>> {
    if p <= 0 || p % 2 == 0 || q <= 0 || q % 2 == 0 {
        return Err(Error::Precondition("p, q must be odd and positive".into()));
    }
    if c_max < 1 {
        return Err(Error::Precondition("c_max must be >= 1".into()));
    }
    let mut out = Vec::new();
    for c in 1..=c_max {
        let target = 2 * p * c * c; // q(a^2+b^2) = target
        if target % q != 0 {
            continue;
        }
        let sum = target / q; // a^2 + b^2
        let mut a = 0i64;
        while a * a * 2 <= sum {
            let rest = sum - a * a;
            let b = (rest as f64).sqrt().round() as i64;
            if b * b == rest && b >= a {
                // stored as (larger, smaller)
                if gcd3(b.unsigned_abs(), a.unsigned_abs(), c.unsigned_abs()) == 1 {
                    out.push((b, a, c));
                }
            }
            a += 1;
        }
    }
    out.sort_unstable_by_key(|&(a, b, c)| (c, a, b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scheme(s1: i64, s2: i64) -> LineColoringScheme {
        LineColoringScheme::new(Rational::from_int(s1), Rational::from_int(s2)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let s = scheme(1, 2);
        assert_eq!(s.eval(&Rational::from_int(0)), Color::Red);
        assert_eq!(s.eval(&Rational::from_int(3)), Color::Red);

        let s = LineColoringScheme::new(Rational::from_int(2), Rational::from_int(3)).unwrap();
        assert_eq!(s.m, BigInt::from(1));
        assert_eq!(s.a, Rational::from_int(1));
        assert_eq!(s.eval(&Rational::ratio(5, 2)), Color::Blue);

        let s = scheme(1, 1);
        assert!(s.degenerate);
        assert_eq!(s.eval(&Rational::ratio(7, 2)).index(), 1);
    }

    #[test]
    fn eval_negative_inputs() {
        let s = scheme(1, 2);
        // n = -1 block: pair (blue, green)
        assert_eq!(s.eval(&Rational::from_int(-2)), Color::Blue);
        assert_eq!(s.eval(&Rational::from_int(-1)), Color::Green);
    }

    #[test]
    fn verify_clean_schemes() {
        for (s1, s2) in [(1, 2), (2, 3), (1, 5), (3, 7)] {
            let s = scheme(s1, s2);
            let r = verify_line_scheme(&s, 1000, &Rational::from_int(50), 7);
            assert!(r.violations.is_empty(), "({s1},{s2}): {:?}", r.violations);
        }
    }

    #[test]
    fn verify_degenerate_scheme() {
        let s = scheme(2, 2);
        let r = verify_line_scheme(&s, 500, &Rational::from_int(20), 3);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn verify_rational_scheme() {
        let s = LineColoringScheme::new(Rational::ratio(2, 3), Rational::ratio(7, 4)).unwrap();
        let r = verify_line_scheme(&s, 1000, &Rational::from_int(20), 11);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn mutation_is_caught_by_boundary_sweep() {
        let mut s = scheme(2, 3);
        s.override_pair(1, [Color::Red, Color::Blue]);
        let r = verify_line_scheme(&s, 0, &Rational::from_int(30), 0);
        assert!(!r.violations.is_empty());
    }

    #[test]
    fn at_most_three_colors() {
        let s = scheme(3, 11);
        let mut seen = std::collections::BTreeSet::new();
        let mut x = Rational::from_int(-40);
        let step = Rational::ratio(1, 7);
        while &x < &Rational::from_int(40) {
            seen.insert(s.eval(&x).index());
            x = &x + &step;
        }
        assert!(seen.len() <= 3);
    }

    #[test]
    fn product_identity_case() {
        let c1 = Coloring::new(vec![0, 1, 0, 1]);
        let constant = Coloring {
            assignment: vec![0; 4],
            color_count: 1,
        };
        let p = product_coloring(&c1, &constant).unwrap();
        assert_eq!(p.assignment, c1.assignment);
        assert_eq!(p.color_count, 2);
    }

    #[test]
    fn product_mismatch_errors() {
        let c1 = Coloring::new(vec![0, 1]);
        let c2 = Coloring::new(vec![0, 1, 0]);
        assert!(product_coloring(&c1, &c2).is_err());
    }

    #[test]
    fn parity_examples() {
        assert!(check_odd_parity_solution(1, 1, 1, 1, 1).unwrap().all_odd());
        assert!(check_odd_parity_solution(7, 1, 5, 1, 1).unwrap().all_odd());
        assert!(check_odd_parity_solution(3, 1, 1, 5, 1).unwrap().all_odd());
        assert!(check_odd_parity_solution(2, 1, 1, 1, 1).is_err()); // equation fails
        assert!(check_odd_parity_solution(2, 2, 2, 1, 1).is_err()); // gcd 2
    }

    #[test]
    fn enumerate_examples() {
        let sols = enumerate_odd_parity_solutions(1, 1, 5).unwrap();
        assert!(sols.contains(&(1, 1, 1)));
        assert!(sols.contains(&(7, 1, 5)));

        let sols = enumerate_odd_parity_solutions(3, 1, 10).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn enumerate_feeds_checker() {
        for p in [1i64, 3, 5, 7, 9] {
            for q in [1i64, 3, 5, 7, 9] {
                for (a, b, c) in enumerate_odd_parity_solutions(p, q, 30).unwrap() {
                    let v = check_odd_parity_solution(a, b, c, p, q).unwrap();
                    assert!(v.all_odd(), "p={p} q={q} ({a},{b},{c})");
                }
            }
        }
    }
}
