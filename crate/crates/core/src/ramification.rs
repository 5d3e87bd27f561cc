//! Integer arithmetic of differents and log-differents of finite extensions
//! of discretely valued fields.
//!
//! Everything is expressed in the normalized valuation `v_E` of the upper
//! field: a different is the length of the module of relative differentials,
//! and the log-different is `delta + 1 - e`. Extensions are described by the
//! orders of their lower-numbering ramification groups rather than by field
//! elements.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamificationError {
    #[error("filtration is empty")]
    EmptyFiltration,
    #[error("filtration entry {index} is zero")]
    ZeroOrder { index: usize },
    #[error("filtration increases at index {index}: {previous} < {current}")]
    Increasing {
        index: usize,
        previous: u64,
        current: u64,
    },
    #[error("filtration entry {current} at index {index} does not divide {previous}")]
    NotDividing {
        index: usize,
        previous: u64,
        current: u64,
    },
    #[error("residue characteristic 0 admits no wild inertia, found |G_{index}| = {order}")]
    WildInCharacteristicZero { index: usize, order: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ramification jump must be positive")]
    ZeroJump,
    #[error("ramification index must be positive")]
    ZeroIndex,
    #[error("log-different {delta_log} is negative for delta {delta} and e {e}")]
    NegativeLogDifferent { delta: u64, e: u64, delta_log: i64 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_filtration(orders: &[u64]) -> Result<(), RamificationError> {
    let first = *orders.first().ok_or(RamificationError::EmptyFiltration)?;
    if first == 0 {
        return Err(RamificationError::ZeroOrder { index: 0 });
    }
    for (index, pair) in orders.windows(2).enumerate() {
        let (previous, current) = (pair[0], pair[1]);
        let index = index + 1;
        if current == 0 {
            return Err(RamificationError::ZeroOrder { index });
        }
        if current > previous {
            return Err(RamificationError::Increasing {
                index,
                previous,
                current,
            });
        }
        if previous % current != 0 {
            return Err(RamificationError::NotDividing {
                index,
                previous,
                current,
            });
        }
    }
    Ok(())
}

/// Lower-numbering ramification data `|G_0| >= |G_1| >= ...` of a finite
/// extension, together with the residue characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationDatum {
    residue_char: u64,
    orders: Vec<u64>,
}

impl RamificationDatum {
    pub fn new(residue_char: u64, orders: Vec<u64>) -> Result<Self, RamificationError> {
        if residue_char != 0 && !is_prime(residue_char) {
            return Err(RamificationError::NotPrime(residue_char));
        }
        check_filtration(&orders)?;
        if residue_char == 0 {
            if let Some((index, &order)) = orders.iter().enumerate().skip(1).find(|(_, &o)| o != 1)
            {
                return Err(RamificationError::WildInCharacteristicZero { index, order });
            }
        }
        Ok(Self {
            residue_char,
            orders,
        })
    }

    /// Totally ramified cyclic extension of prime degree `p` with a single
    /// lower jump `j`: `|G_0| = ... = |G_j| = p`, then trivial.
    pub fn cyclic(p: u64, jump: u64) -> Result<Self, RamificationError> {
        if !is_prime(p) {
            return Err(RamificationError::NotPrime(p));
        }
        if jump == 0 {
            return Err(RamificationError::ZeroJump);
        }
        let mut orders = vec![p; jump as usize + 1];
        orders.push(1);
        Self::new(p, orders)
    }

    pub fn residue_char(&self) -> u64 {
        self.residue_char
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Ramification index `e = |G_0|`.
    pub fn ramification_index(&self) -> u64 {
        self.orders[0]
    }

    /// Indices `i` with `|G_{i+1}| < |G_i|`; an order drop past the end of
    /// the stored list counts when the last stored order exceeds 1.
    pub fn jumps(&self) -> Vec<usize> {
        let mut jumps: Vec<usize> = self
            .orders
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] < w[0])
            .map(|(i, _)| i)
            .collect();
        if *self.orders.last().unwrap() > 1 {
            jumps.push(self.orders.len() - 1);
        }
        jumps
    }

    pub fn different(&self) -> DifferentValue {
        let delta = self.orders.iter().map(|o| o - 1).sum();
        DifferentValue::new(delta, self.ramification_index())
            .expect("Hilbert's formula always yields delta >= e - 1")
    }
}

/// A different together with its log variant, both in units of `v_E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DifferentValue {
    delta: u64,
    delta_log: u64,
    e: u64,
}

impl DifferentValue {
    pub fn new(delta: u64, e: u64) -> Result<Self, RamificationError> {
        if e == 0 {
            return Err(RamificationError::ZeroIndex);
        }
        let delta_log = log_different(delta, e);
        if delta_log < 0 {
            return Err(RamificationError::NegativeLogDifferent {
                delta,
                e,
                delta_log,
            });
        }
        Ok(Self {
            delta,
            delta_log: delta_log as u64,
            e,
        })
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn delta_log(&self) -> u64 {
        self.delta_log
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn is_unramified(&self) -> bool {
        self.delta == 0
    }

    pub fn is_tame(&self) -> bool {
        tameness(self.delta_log)
    }
}

/// Hilbert's formula `sum_{i >= 0} (|G_i| - 1)`.
pub fn hilbert_different(orders: &[u64]) -> Result<u64, RamificationError> {
    check_filtration(orders)?;
    Ok(orders.iter().map(|o| o - 1).sum())
}

/// Different and log-different of a cyclic extension of prime degree `p`
/// with lower jump `j`.
pub fn cyclic_jump_invariants(p: u64, jump: u64) -> Result<DifferentValue, RamificationError> {
    if !is_prime(p) {
        return Err(RamificationError::NotPrime(p));
    }
    if jump == 0 {
        return Err(RamificationError::ZeroJump);
    }
    DifferentValue::new((p - 1) * (jump + 1), p)
}

/// `delta + 1 - e`; negative results signal inconsistent data.
pub fn log_different(delta: u64, e: u64) -> i64 {
    delta as i64 + 1 - e as i64
}

/// Different of a tower `E/F/G` from the differents of its two steps.
pub fn tower_different(delta_ef: u64, e_ef: u64, delta_fg: u64) -> u64 {
    delta_ef + e_ef * delta_fg
}

/// Log-different of a tower `E/F/G`; same shape as [`tower_different`].
pub fn tower_log_different(dlog_ef: u64, e_ef: u64, dlog_fg: u64) -> u64 {
    dlog_ef + e_ef * dlog_fg
}

/// Tame iff the log-different vanishes.
pub fn tameness(delta_log: u64) -> bool {
    delta_log == 0
}

pub fn unramified(delta: u64) -> bool {
    delta == 0
}

/// `delta_log <= v_E(e * f^i)`, the upper bound on the log-different. The
/// right-hand side is supplied by the caller since residue fields are not
/// modelled.
pub fn within_bound(delta_log: u64, valuation_of_ef: u64) -> bool {
    delta_log <= valuation_of_ef
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_different(&[2, 2, 2]), Ok(3));
        assert_eq!(hilbert_different(&[1]), Ok(0));
        assert_eq!(hilbert_different(&[3, 3]), Ok(4));
        assert_eq!(
            hilbert_different(&[3, 3]).unwrap(),
            cyclic_jump_invariants(3, 1).unwrap().delta()
        );
    }

    #[test]
    fn malformed_filtrations() {
        assert_eq!(
            hilbert_different(&[]),
            Err(RamificationError::EmptyFiltration)
        );
        assert!(matches!(
            hilbert_different(&[2, 4]),
            Err(RamificationError::Increasing { index: 1, .. })
        ));
        assert!(matches!(
            hilbert_different(&[6, 4]),
            Err(RamificationError::NotDividing { index: 1, .. })
        ));
        assert!(matches!(
            hilbert_different(&[2, 0]),
            Err(RamificationError::ZeroOrder { index: 1 })
        ));
        assert!(matches!(
            RamificationDatum::new(0, vec![3, 3]),
            Err(RamificationError::WildInCharacteristicZero { index: 1, order: 3 })
        ));
        assert!(RamificationDatum::new(0, vec![3, 1, 1]).is_ok());
        assert_eq!(
            RamificationDatum::new(4, vec![2]),
            Err(RamificationError::NotPrime(4))
        );
    }

    #[test]
    fn cyclic_examples() {
        let v = cyclic_jump_invariants(2, 2).unwrap();
        assert_eq!((v.delta(), v.delta_log(), v.e()), (3, 2, 2));
        let v = cyclic_jump_invariants(2, 1).unwrap();
        assert_eq!((v.delta(), v.delta_log()), (2, 1));
        let v = cyclic_jump_invariants(5, 3).unwrap();
        assert_eq!((v.delta(), v.delta_log()), (16, 12));
        assert_eq!(v.delta_log() as i64, log_different(v.delta(), 5));
        assert_eq!(
            cyclic_jump_invariants(6, 1),
            Err(RamificationError::NotPrime(6))
        );
        assert_eq!(
            cyclic_jump_invariants(2, 0),
            Err(RamificationError::ZeroJump)
        );
    }

    #[test]
    fn log_different_examples() {
        assert_eq!(log_different(3, 2), 2);
        assert_eq!(log_different(0, 1), 0);
        assert_eq!(log_different(4, 5), 0);
        assert!(matches!(
            DifferentValue::new(1, 5),
            Err(RamificationError::NegativeLogDifferent { delta_log: -3, .. })
        ));
    }

    #[test]
    fn towers() {
        assert_eq!(tower_different(3, 2, 0), 3);
        assert_eq!(tower_different(0, 1, 7), 7);
        assert_eq!(tower_different(3, 2, 2), 7);
    }

    #[test]
    fn tame_predicates() {
        assert!(tameness(0));
        assert!(!tameness(2));
        assert!(!tameness(1));
        assert!(unramified(0));
        assert!(!cyclic_jump_invariants(2, 2).unwrap().is_tame());
    }

    #[test]
    fn example_two_bound() {
        // Ramified quadratic extension: v_{k'}(2) = e = 2.
        let v = cyclic_jump_invariants(2, 2).unwrap();
        assert!(within_bound(v.delta_log(), 2));
        assert!(!within_bound(v.delta_log(), 1));
    }

    #[test]
    fn datum_jumps() {
        let d = RamificationDatum::cyclic(2, 2).unwrap();
        assert_eq!(d.orders(), &[2, 2, 2, 1]);
        assert_eq!(d.jumps(), vec![2]);
        assert_eq!(d.different().delta(), 3);
        let d = RamificationDatum::new(3, vec![6, 3, 3]).unwrap();
        assert_eq!(d.jumps(), vec![0, 2]);
        assert_eq!(d.different(), DifferentValue::new(2 + 2 + 5, 6).unwrap());
    }

    #[test]
    fn hilbert_matches_single_jump_formula() {
        for p in (2..=13).filter(|&p| is_prime(p)) {
            for j in 1..=10 {
                let datum = RamificationDatum::cyclic(p, j).unwrap();
                assert_eq!(datum.jumps(), vec![j as usize]);
                let delta = hilbert_different(datum.orders()).unwrap();
                assert_eq!(delta, (p - 1) * (j + 1));
                assert_eq!(datum.different(), cyclic_jump_invariants(p, j).unwrap());
            }
        }
    }

    fn filtration() -> impl Strategy<Value = Vec<u64>> {
        // Build from the tail: each step multiplies by a small factor.
        prop::collection::vec(prop::sample::select(vec![1u64, 1, 2, 3, 5]), 1..8).prop_map(
            |factors| {
                let mut orders = Vec::with_capacity(factors.len());
                let mut acc = 1;
                for f in factors {
                    acc *= f;
                    orders.push(acc);
                }
                orders.reverse();
                orders
            },
        )
    }

    proptest! {
        #[test]
        fn log_different_of_valid_filtration_is_non_negative(orders in filtration()) {
            let delta = hilbert_different(&orders).unwrap();
            prop_assert!(log_different(delta, orders[0]) >= 0);
        }

        #[test]
        fn tower_is_associative(
            d1 in 0u64..50, e1 in 1u64..8,
            d2 in 0u64..50, e2 in 1u64..8,
            d3 in 0u64..50,
        ) {
            // (E/F, F/G) then G/H versus E/F then (F/G, G/H).
            let left = tower_different(tower_different(d1, e1, d2), e1 * e2, d3);
            let right = tower_different(d1, e1, tower_different(d2, e2, d3));
            prop_assert_eq!(left, right);
            let left = tower_log_different(tower_log_different(d1, e1, d2), e1 * e2, d3);
            let right = tower_log_different(d1, e1, tower_log_different(d2, e2, d3));
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn tower_of_cyclic_steps() {
        // Two quadratic steps with jumps 2 and 1, composed both ways with a
        // trivial third step.
        let upper = cyclic_jump_invariants(2, 2).unwrap();
        let lower = cyclic_jump_invariants(2, 1).unwrap();
        let two_step = tower_different(upper.delta(), upper.e(), lower.delta());
        assert_eq!(two_step, 3 + 2 * 2);
        let two_step_log = tower_log_different(upper.delta_log(), upper.e(), lower.delta_log());
        assert_eq!(
            two_step_log as i64,
            log_different(two_step, upper.e() * lower.e())
        );
    }
}
