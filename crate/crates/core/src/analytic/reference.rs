//! Published expressions, kept verbatim as fixtures. Where a printed
//! expression disagrees with the exact enumeration, both forms are provided.

use crate::pauli::PauliCorrection;
use crate::state::Amplitude;

fn trig(chi: f64) -> (f64, f64, f64, f64) {
    let (c, s) = (chi.cos(), chi.sin());
    let n3 = 1.0 / (c.powi(6) + s.powi(6));
    let n9 = 1.0 / (c.powi(18) + s.powi(18));
    (c, s, n3, n9)
}

/// Outcome probabilities of the first measurement; `a2 = |a|^2`, `b2 = |b|^2`.
pub fn first_attempt(a2: f64, b2: f64, chi: f64) -> [f64; 4] {
    let (c, s, _, _) = trig(chi);
    let p12 = s * s * c * c;
    [
        a2 * c.powi(4) + b2 * s.powi(4),
        p12,
        p12,
        a2 * s.powi(4) + b2 * c.powi(4),
    ]
}

/// Path probabilities `P_{0k}` after a first failure on outcome 0.
pub fn retry_after_0(a2: f64, b2: f64, chi: f64) -> [f64; 4] {
    let (c, s, n3, _) = trig(chi);
    [
        n3 * (a2 * c.powi(12) + b2 * s.powi(12)),
        n3 * c.powi(6) * s.powi(6),
        c.powi(4) * s.powi(4),
        c * c * s * s * (a2 * c.powi(4) + b2 * s.powi(4)),
    ]
}

/// Path probabilities `P_{3k}` as printed. The last entry carries `|a|^2`
/// and `|b|^2` swapped; see [`retry_after_3`].
pub fn retry_after_3_printed(a2: f64, b2: f64, chi: f64) -> [f64; 4] {
    let (c, s, n3, _) = trig(chi);
    [
        c * c * s * s * (a2 * s.powi(4) + b2 * c.powi(4)),
        c.powi(4) * s.powi(4),
        n3 * c.powi(6) * s.powi(6),
        n3 * (a2 * c.powi(12) + b2 * s.powi(12)),
    ]
}

/// Path probabilities `P_{3k}` after a first failure on outcome 3.
pub fn retry_after_3(a2: f64, b2: f64, chi: f64) -> [f64; 4] {
    let mut p = retry_after_3_printed(a2, b2, chi);
    let (c, s, n3, _) = trig(chi);
    p[3] = n3 * (a2 * s.powi(12) + b2 * c.powi(12));
    p
}

pub fn retry_increment_after_0(chi: f64) -> f64 {
    let (c, s, _, _) = trig(chi);
    c.powi(6) * s.powi(6) / (c.powi(6) + s.powi(6)) + c.powi(4) * s.powi(4)
}

pub fn retry_increment_after_3(chi: f64) -> f64 {
    retry_increment_after_0(chi)
}

fn third_retry_shared(c: f64) -> (f64, f64) {
    let d = 4.0 - 3.0 * c * c;
    (d, 4.0 * d * d - 3.0 * c.powi(6))
}

/// The eight increments of the third repetition in printed order, with the
/// `C^54` denominator as printed.
pub fn third_retry_terms_printed(c: f64) -> [f64; 8] {
    let (d, e) = third_retry_shared(c);
    let mut t = third_retry_terms(c);
    let printed = 4.0 * d * d * (d * d - c.powi(6)).powi(2) - c.powi(18);
    t[4] = c.powi(54) / (128.0 * d.powi(5) * e.powi(3) * printed);
    t
}

/// The eight increments of the third repetition; the `C^54` term uses the
/// denominator `4 D^2 E^2 - 3 C^18` that the enumeration produces.
pub fn third_retry_terms(c: f64) -> [f64; 8] {
    let (d, e) = third_retry_shared(c);
    let f = 4.0 * d * d * e * e - 3.0 * c.powi(18);
    [
        c.powi(8) / 128.0,
        c.powi(10) / (128.0 * d),
        c.powi(14) / (128.0 * d.powi(3)),
        c.powi(18) / (128.0 * d.powi(5)),
        c.powi(54) / (128.0 * d.powi(5) * e.powi(3) * f),
        c.powi(24) / (128.0 * d.powi(5) * e),
        c.powi(36) / (128.0 * d.powi(5) * e.powi(3)),
        c.powi(20) / (128.0 * d.powi(3) * e),
    ]
}

/// Branch paths (first two outcomes, then the last) whose probabilities
/// make up each term of [`third_retry_terms`]; every term has two mirror paths.
pub const THIRD_RETRY_PATHS: [[[usize; 4]; 2]; 8] = [
    [[0, 3, 2, 0], [3, 0, 1, 3]],
    [[0, 3, 2, 3], [3, 0, 1, 0]],
    [[0, 3, 1, 1], [3, 0, 2, 2]],
    [[0, 0, 3, 3], [3, 3, 0, 0]],
    [[0, 0, 0, 1], [3, 3, 3, 2]],
    [[0, 0, 3, 0], [3, 3, 0, 3]],
    [[0, 0, 0, 2], [3, 3, 3, 1]],
    [[0, 3, 1, 2], [3, 0, 2, 1]],
];

type StateFn = fn(Amplitude, Amplitude, f64) -> [Amplitude; 4];

/// One row of the second-repetition table.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    /// Outcomes of the first two attempts.
    pub input: [usize; 2],
    pub exponents: (u64, u64),
    pub outcome: usize,
    pub unit: bool,
    /// Unnormalized state of qubits 2 and 3, indexed `|q2 q3>`.
    pub state: StateFn,
    /// `(|a|^2, |b|^2, chi) -> P`.
    pub probability: fn(f64, f64, f64) -> f64,
}

fn st(k00: Amplitude, k01: Amplitude, k10: Amplitude, k11: Amplitude) -> [Amplitude; 4] {
    [k00, k01, k10, k11]
}

const Z: Amplitude = Amplitude::new(0.0, 0.0);

pub fn second_retry_table() -> [TableRow; 16] {
    let row =
        |input, exponents, outcome, unit, state: StateFn, probability: fn(f64, f64, f64) -> f64| {
            TableRow {
                input,
                exponents,
                outcome,
                unit,
                state,
                probability,
            }
        };
    [
        row(
            [0, 0],
            (9, 3),
            0,
            false,
            |a, b, x| {
                let (c, s, n3, n9) = trig(x);
                let k = n3 * n9.sqrt();
                st(a * k * c.powi(18), Z, Z, b * k * s.powi(18))
            },
            |a2, b2, x| {
                let (c, s, n3, n9) = trig(x);
                n3 * n3 * n9 * (a2 * c.powi(36) + b2 * s.powi(36))
            },
        ),
        row(
            [0, 0],
            (9, 3),
            1,
            true,
            |a, b, x| {
                let (c, s, n3, n9) = trig(x);
                let k = n3 * n9.sqrt() * (c * s).powi(9);
                st(a * k, Z, Z, -b * k)
            },
            |_, _, x| {
                let (c, s, n3, n9) = trig(x);
                n3 * n3 * n9 * (c * s).powi(18)
            },
        ),
        row(
            [0, 0],
            (9, 3),
            2,
            true,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.powf(1.5) * (c * s).powi(6);
                st(Z, b * k, a * k, Z)
            },
            |_, _, x| {
                let (c, s, n3, _) = trig(x);
                n3.powi(3) * (c * s).powi(12)
            },
        ),
        row(
            [0, 0],
            (9, 3),
            3,
            false,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.powf(1.5) * (c * s).powi(3);
                st(Z, b * k * s.powi(6), -a * k * c.powi(6), Z)
            },
            |a2, b2, x| {
                let (c, s, n3, _) = trig(x);
                n3.powi(3) * (c * s).powi(6) * (a2 * c.powi(12) + b2 * s.powi(12))
            },
        ),
        row(
            [0, 3],
            (3, 1),
            0,
            true,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.sqrt() * (c * s).powi(4);
                st(a * k, Z, Z, b * k)
            },
            |_, _, x| {
                let (c, s, n3, _) = trig(x);
                n3 * (c * s).powi(8)
            },
        ),
        row(
            [0, 3],
            (3, 1),
            1,
            false,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.sqrt() * c * s;
                st(-a * k * c.powi(6), Z, Z, b * k * s.powi(6))
            },
            |a2, b2, x| {
                let (c, s, n3, _) = trig(x);
                n3 * (c * s).powi(2) * (a2 * c.powi(12) + b2 * s.powi(12))
            },
        ),
        row(
            [0, 3],
            (3, 1),
            2,
            false,
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                let k = (c * s).powi(2);
                st(Z, b * k * s * s, a * k * c * c, Z)
            },
            |a2, b2, x| {
                let (c, s, _, _) = trig(x);
                (c * s).powi(4) * (a2 * c.powi(4) + b2 * s.powi(4))
            },
        ),
        row(
            [0, 3],
            (3, 1),
            3,
            true,
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                let k = (c * s).powi(3);
                st(Z, -b * k, a * k, Z)
            },
            |_, _, x| {
                let (c, s, _, _) = trig(x);
                (c * s).powi(6)
            },
        ),
        row(
            [3, 0],
            (1, 3),
            0,
            true,
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                let k = (c * s).powi(3);
                st(Z, a * k, b * k, Z)
            },
            |_, _, x| {
                let (c, s, _, _) = trig(x);
                (c * s).powi(6)
            },
        ),
        row(
            [3, 0],
            (1, 3),
            1,
            false,
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                let k = (c * s).powi(2);
                st(Z, a * k * s * s, -b * k * c * c, Z)
            },
            |a2, b2, x| {
                let (c, s, _, _) = trig(x);
                (c * s).powi(4) * (a2 * s.powi(4) + b2 * c.powi(4))
            },
        ),
        row(
            [3, 0],
            (1, 3),
            2,
            false,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.sqrt() * c * s;
                st(b * k * c.powi(6), Z, Z, a * k * s.powi(6))
            },
            |a2, b2, x| {
                let (c, s, n3, _) = trig(x);
                n3 * (c * s).powi(2) * (a2 * s.powi(12) + b2 * c.powi(12))
            },
        ),
        row(
            [3, 0],
            (1, 3),
            3,
            true,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.sqrt() * (c * s).powi(4);
                st(b * k, Z, Z, -a * k)
            },
            |_, _, x| {
                let (c, s, n3, _) = trig(x);
                n3 * (c * s).powi(8)
            },
        ),
        row(
            [3, 3],
            (3, 9),
            0,
            false,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.powf(1.5) * (c * s).powi(3);
                st(Z, a * k * s.powi(6), b * k * c.powi(6), Z)
            },
            |a2, b2, x| {
                let (c, s, n3, _) = trig(x);
                n3.powi(3) * (c * s).powi(6) * (a2 * s.powi(12) + b2 * c.powi(12))
            },
        ),
        row(
            [3, 3],
            (3, 9),
            1,
            true,
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3.powf(1.5) * (c * s).powi(6);
                st(Z, a * k, -b * k, Z)
            },
            |_, _, x| {
                let (c, s, n3, _) = trig(x);
                n3.powi(3) * (c * s).powi(12)
            },
        ),
        row(
            [3, 3],
            (3, 9),
            2,
            true,
            |a, b, x| {
                let (c, s, n3, n9) = trig(x);
                let k = n3 * n9.sqrt() * (c * s).powi(9);
                st(b * k, Z, Z, a * k)
            },
            |_, _, x| {
                let (c, s, n3, n9) = trig(x);
                n3 * n3 * n9 * (c * s).powi(18)
            },
        ),
        row(
            [3, 3],
            (3, 9),
            3,
            false,
            |a, b, x| {
                let (c, s, n3, n9) = trig(x);
                let k = n3 * n9.sqrt();
                st(-b * k * c.powi(18), Z, Z, a * k * s.powi(18))
            },
            |a2, b2, x| {
                let (c, s, n3, n9) = trig(x);
                n3 * n3 * n9 * (a2 * s.powi(36) + b2 * c.powi(36))
            },
        ),
    ]
}

/// A correctable two-qubit state `(spare, bob)` and the printed corrections
/// for the spare results `+` and `-`.
#[derive(Clone, Copy, Debug)]
pub struct CorrectionRow {
    pub label: &'static str,
    pub state: fn(Amplitude, Amplitude) -> [Amplitude; 4],
    pub plus: PauliCorrection,
    pub minus: PauliCorrection,
}

pub fn correction_table() -> [CorrectionRow; 8] {
    use PauliCorrection::{I, X, Z as PZ, ZX};
    let row = |label, state, plus, minus| CorrectionRow {
        label,
        state,
        plus,
        minus,
    };
    [
        row("a|00>+b|11>", |a, b| st(a, Z, Z, b), I, PZ),
        row("a|00>-b|11>", |a, b| st(a, Z, Z, -b), PZ, I),
        row("a|11>+b|00>", |a, b| st(b, Z, Z, a), X, ZX),
        row("a|11>-b|00>", |a, b| st(-b, Z, Z, a), ZX, X),
        row("a|01>+b|10>", |a, b| st(Z, a, b, Z), X, ZX),
        row("a|01>-b|10>", |a, b| st(Z, a, -b, Z), ZX, X),
        row("a|10>+b|01>", |a, b| st(Z, b, a, Z), I, PZ),
        row("a|10>-b|01>", |a, b| st(Z, -b, a, Z), PZ, PZ),
    ]
}

type RegisterFn = fn(Amplitude, Amplitude, f64) -> [Amplitude; 16];

fn reg(terms: &[(usize, Amplitude)]) -> [Amplitude; 16] {
    let mut v = [Z; 16];
    for &(i, x) in terms {
        v[i] += x;
    }
    v
}

/// Printed register states `|q0 q1 q2 q3>` after the failures along `path`
/// (`[0]`, `[3]`, `[0, 0]`, `[0, 3]`, `[3, 0]` or `[3, 3]`), together with the
/// basis exponents chosen next.
pub fn failure_state(path: &[usize]) -> Option<(RegisterFn, (u64, u64))> {
    let f: (RegisterFn, (u64, u64)) = match path {
        [0] => (
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                reg(&[
                    (0, a * c.powi(3)),
                    (15, b * s.powi(3)),
                    (3, b * c * s * s),
                    (12, a * c * c * s),
                ])
            },
            (3, 1),
        ),
        [3] => (
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                reg(&[
                    (7, a * s.powi(3)),
                    (8, b * c.powi(3)),
                    (4, -b * c * c * s),
                    (11, -a * c * s * s),
                ])
            },
            (1, 3),
        ),
        [0, 0] => (
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3 * (c * s).powi(3);
                reg(&[
                    (0, a * n3 * c.powi(9)),
                    (15, b * n3 * s.powi(9)),
                    (10, a * k * c.powi(3)),
                    (5, b * k * s.powi(3)),
                ])
            },
            (9, 3),
        ),
        [0, 3] => (
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                let (k1, k2) = (c * s, (c * s).powi(2));
                reg(&[
                    (12, a * k1 * c.powi(3)),
                    (3, b * k1 * s.powi(3)),
                    (6, -a * k2 * c),
                    (9, -b * k2 * s),
                ])
            },
            (3, 1),
        ),
        [3, 0] => (
            |a, b, x| {
                let (c, s, _, _) = trig(x);
                let (k1, k2) = (c * s, (c * s).powi(2));
                reg(&[
                    (11, a * k1 * s.powi(3)),
                    (4, b * k1 * c.powi(3)),
                    (1, a * k2 * s),
                    (14, b * k2 * c),
                ])
            },
            (1, 3),
        ),
        [3, 3] => (
            |a, b, x| {
                let (c, s, n3, _) = trig(x);
                let k = n3 * (c * s).powi(3);
                reg(&[
                    (7, a * n3 * s.powi(9)),
                    (8, b * n3 * c.powi(9)),
                    (13, -a * k * s.powi(3)),
                    (2, -b * k * c.powi(3)),
                ])
            },
            (3, 9),
        ),
        _ => return None,
    };
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_probabilities_are_complete() {
        for chi in [0.1, 0.4, 0.7] {
            for (a2, b2) in [(1.0, 0.0), (0.36, 0.64)] {
                let p0 = first_attempt(a2, b2, chi);
                assert!((p0.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!((retry_after_0(a2, b2, chi).iter().sum::<f64>() - p0[0]).abs() < 1e-14);
                assert!((retry_after_3(a2, b2, chi).iter().sum::<f64>() - p0[3]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn printed_retry_after_3_differs_only_for_unequal_weights() {
        let chi = 0.3;
        let (p, q) = (
            retry_after_3_printed(0.5, 0.5, chi),
            retry_after_3(0.5, 0.5, chi),
        );
        assert!((p[3] - q[3]).abs() < 1e-15);
        let (p, q) = (
            retry_after_3_printed(1.0, 0.0, chi),
            retry_after_3(1.0, 0.0, chi),
        );
        assert!((p[3] - q[3]).abs() > 1e-3);
    }

    #[test]
    fn table_rows_match_their_states() {
        let (a, b) = (Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8));
        for row in second_retry_table() {
            let v = (row.state)(a, b, 0.45);
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            let p = (row.probability)(0.36, 0.64, 0.45);
            assert!((norm - p).abs() < 1e-15, "{:?} {}", row.input, row.outcome);
        }
    }

    #[test]
    fn printed_c54_term_is_negative_at_full_concurrence() {
        assert!(third_retry_terms_printed(1.0)[4] < 0.0);
        let s: f64 = third_retry_terms(1.0).iter().sum();
        assert!((s - 1.0 / 16.0).abs() < 1e-15);
    }
}
