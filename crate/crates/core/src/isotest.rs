//! Isomorphism of perfect evolution algebras over the base field.
//!
//! A perfect evolution algebra has, up to order and scaling, a unique natural
//! basis, so two of them are isomorphic exactly when some monomial map sends
//! one structure matrix to the other. The search runs over relabelings whose
//! supports match and then solves for the scales exactly.

use std::collections::BTreeMap;
use std::fmt;

use log::warn;
use num::bigint::BigInt;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, EvolutionAlgebra, MonomialMap};
use crate::field::{Field, FieldError, FieldSpec};
use crate::format::{FormatError, PatternTemplate};
use crate::pattern::SupportPattern;
use crate::perm::Permutation;
use crate::snf::solve_congruences;

/// Resampling bound for singular instances of generically perfect patterns.
pub const MAX_RESAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("the {0} algebra is not perfect; monomial equivalence does not decide isomorphism there")]
    NotPerfect(&'static str),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("no nonsingular instance after {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// `d_i^2 = ratio * d_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingRelation<E> {
    pub i: usize,
    pub j: usize,
    pub ratio: E,
}

/// The scale equations for a fixed relabeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingSystem<E> {
    pub unknowns: usize,
    pub relations: Vec<ScalingRelation<E>>,
}

/// Support of `apply_monomial((sigma, d), M)` for any scales `d`.
pub fn relabeled_support(sigma: &Permutation, p: &SupportPattern) -> SupportPattern {
    p.permute(&sigma.inverse())
}

impl<E: Clone + PartialEq> ScalingSystem<E> {
    /// `None` when `sigma` does not carry the support of `m` onto that of `n`.
    pub fn build<F: Field<Elem = E>>(sigma: &Permutation, m: &EvolutionAlgebra<F>, n: &EvolutionAlgebra<F>) -> Option<Self> {
        if relabeled_support(sigma, &m.support()) != n.support() {
            return None;
        }
        let f = m.field();
        let tau = sigma.inverse();
        let size = m.dim();
        let relations = (0..size)
            .flat_map(|j| (0..size).map(move |i| (j, i)))
            .filter(|&(j, i)| !f.is_zero(n.entry(j, i)))
            .map(|(j, i)| ScalingRelation {
                i,
                j,
                ratio: f.div(n.entry(j, i), m.entry(tau.apply(j), tau.apply(i))).expect("supports match"),
            })
            .collect();
        Some(ScalingSystem { unknowns: size, relations })
    }

    pub fn is_satisfied_by<F: Field<Elem = E>>(&self, field: &F, d: &[E]) -> bool {
        d.len() == self.unknowns
            && d.iter().all(|x| !field.is_zero(x))
            && self.relations.iter().all(|r| field.mul(&d[r.i], &d[r.i]) == field.mul(&r.ratio, &d[r.j]))
    }

    /// A nonzero solution in the base field, if any.
    ///
    /// In multiplicative coordinates each relation reads `2 x_i - x_j = e`
    /// on every cyclic component, a linear system over `Z / m`.
    pub fn solve<F: Field<Elem = E>>(&self, field: &F) -> Result<Option<Vec<E>>, FieldError> {
        let ratios: Vec<E> = self.relations.iter().map(|r| r.ratio.clone()).collect();
        let coords = field.unit_coordinates(&ratios)?;
        let a: Vec<Vec<BigInt>> = self
            .relations
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::from(0); self.unknowns];
                row[r.i] += 2;
                row[r.j] -= 1;
                row
            })
            .collect();
        let mut d = vec![field.one(); self.unknowns];
        for (k, (modulus, generator)) in coords.moduli.iter().zip(&coords.generators).enumerate() {
            let rhs: Vec<BigInt> = coords.exponents.iter().map(|e| e[k].clone()).collect();
            let Some(x) = solve_congruences(&a, self.unknowns, &rhs, modulus) else {
                return Ok(None);
            };
            for (di, xi) in d.iter_mut().zip(&x) {
                *di = field.mul(di, &field.pow(generator, xi).expect("generators are units"));
            }
        }
        debug_assert!(self.is_satisfied_by(field, &d));
        Ok(Some(d))
    }
}

/// Scales making `(sigma, d)` send `m` to `n`, if the supports match and the
/// scale equations are solvable in the base field.
pub fn solve_scaling<F: Field>(
    sigma: &Permutation,
    m: &EvolutionAlgebra<F>,
    n: &EvolutionAlgebra<F>,
) -> Result<Option<Vec<F::Elem>>, IsoError> {
    check_compatible(m, n)?;
    match ScalingSystem::build(sigma, m, n) {
        Some(system) => Ok(system.solve(m.field())?),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome<E> {
    Isomorphic { map: MonomialMap<E> },
    /// No relabeling matches the supports; holds over every extension field too.
    SupportObstruction { reason: String },
    /// Supports match for some relabeling but no scales exist in the base field.
    NoBaseFieldScaling,
}

impl<E> IsoOutcome<E> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }

    pub fn map(&self) -> Option<&MonomialMap<E>> {
        match self {
            IsoOutcome::Isomorphic { map } => Some(map),
            _ => None,
        }
    }
}

impl<E: fmt::Debug> fmt::Display for IsoOutcome<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoOutcome::Isomorphic { map } => write!(f, "isomorphic via sigma = {}", map.sigma),
            IsoOutcome::SupportObstruction { reason } => write!(f, "not isomorphic: {reason}"),
            IsoOutcome::NoBaseFieldScaling => write!(f, "not isomorphic over the base field: no scaling solves the system"),
        }
    }
}

fn check_compatible<F: Field>(m: &EvolutionAlgebra<F>, n: &EvolutionAlgebra<F>) -> Result<(), IsoError> {
    if m.field().spec() != n.field().spec() {
        return Err(IsoError::FieldMismatch(m.field().spec(), n.field().spec()));
    }
    if m.dim() != n.dim() {
        return Err(IsoError::DimensionMismatch(m.dim(), n.dim()));
    }
    Ok(())
}

/// First isomorphism in lexicographic order of `sigma`.
pub fn find_isomorphism<F: Field>(m: &EvolutionAlgebra<F>, n: &EvolutionAlgebra<F>) -> Result<IsoOutcome<F::Elem>, IsoError> {
    check_compatible(m, n)?;
    if !m.is_perfect() {
        return Err(IsoError::NotPerfect("first"));
    }
    if !n.is_perfect() {
        return Err(IsoError::NotPerfect("second"));
    }
    let (pm, pn) = (m.support(), n.support());
    if pm.zero_count() != pn.zero_count() {
        return Ok(IsoOutcome::SupportObstruction { reason: "zero-count mismatch".into() });
    }
    if pm.fingerprint() != pn.fingerprint() {
        return Ok(IsoOutcome::SupportObstruction { reason: "fingerprint mismatch".into() });
    }
    let mut supports_matched = false;
    for sigma in Permutation::all(m.dim()) {
        let Some(system) = ScalingSystem::build(&sigma, m, n) else {
            continue;
        };
        supports_matched = true;
        if let Some(scales) = system.solve(m.field())? {
            let map = MonomialMap::new(m.field(), sigma, scales)?;
            debug_assert_eq!(&m.apply_monomial(&map)?, n);
            return Ok(IsoOutcome::Isomorphic { map });
        }
    }
    Ok(if supports_matched {
        IsoOutcome::NoBaseFieldScaling
    } else {
        IsoOutcome::SupportObstruction { reason: "no relabeling matches the supports".into() }
    })
}

/// Checks `apply_monomial(map, m) == n` exactly.
pub fn verify_isomorphism<F: Field>(map: &MonomialMap<F::Elem>, m: &EvolutionAlgebra<F>, n: &EvolutionAlgebra<F>) -> bool {
    m.apply_monomial(map).is_ok_and(|image| &image == n)
}

/// Random nonzero values on the support of `p`; resamples singular draws when
/// `p` is generically perfect. Returns the instance and the number of draws.
pub fn sample_instance<F: Field>(
    p: &SupportPattern,
    field: &F,
    rng: &mut dyn RngCore,
) -> Result<(EvolutionAlgebra<F>, usize), IsoError> {
    let n = p.dim();
    let must_be_perfect = p.generically_perfect();
    for attempt in 1..=MAX_RESAMPLES {
        let rows: Vec<Vec<F::Elem>> = (0..n)
            .map(|k| (0..n).map(|i| if p.get(k, i) { field.random_nonzero(rng) } else { field.zero() }).collect())
            .collect();
        let a = EvolutionAlgebra::from_rows(field.clone(), rows)?;
        if !must_be_perfect || a.is_perfect() {
            return Ok((a, attempt));
        }
        warn!("singular draw {attempt} for a generically perfect pattern over {}; resampling", field.spec());
    }
    Err(IsoError::RetriesExhausted(MAX_RESAMPLES))
}

pub fn random_instance<F: Field>(p: &SupportPattern, field: &F, seed: u64) -> Result<EvolutionAlgebra<F>, IsoError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_instance(p, field, &mut rng).map(|(a, _)| a)
}

/// Seeded instance of a template with one random nonzero value per parameter
/// name; constants stay as written.
pub fn random_template_instance<F: Field>(t: &PatternTemplate, field: &F, seed: u64) -> Result<EvolutionAlgebra<F>, IsoError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let must_be_perfect = t.support().generically_perfect();
    for attempt in 1..=MAX_RESAMPLES {
        let values: BTreeMap<String, F::Elem> = t.parameters().into_iter().map(|name| (name, field.random_nonzero(&mut rng))).collect();
        let a = t.instantiate(field.clone(), |name| values.get(name).cloned())?;
        if !must_be_perfect || a.is_perfect() {
            return Ok(a);
        }
        warn!("singular draw {attempt} for a generically perfect template over {}; resampling", field.spec());
    }
    Err(IsoError::RetriesExhausted(MAX_RESAMPLES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};

    fn q(rows: &[&[i64]]) -> EvolutionAlgebra<Rationals> {
        EvolutionAlgebra::from_int_rows(Rationals, rows).unwrap()
    }

    #[test]
    fn monomial_pair_found_with_unit_scales() {
        let m = q(&[&[1, 1, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let n = q(&[&[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 1, 1]]);
        let outcome = find_isomorphism(&m, &n).unwrap();
        let map = outcome.map().expect("isomorphic");
        assert!(map.scales.iter().all(|d| *d == Rationals.one()));
        assert!(verify_isomorphism(map, &m, &n));
        let stated = MonomialMap::permutation(&Rationals, Permutation::from_cycles("(1,2,4,3)", 4).unwrap());
        assert!(verify_isomorphism(&stated, &m, &n));
    }

    #[test]
    fn same_matrix_gives_identity() {
        let m = q(&[&[1, 2], &[3, 5]]);
        let outcome = find_isomorphism(&m, &m).unwrap();
        assert_eq!(outcome.map(), Some(&MonomialMap::identity(&Rationals, 2)));
    }

    #[test]
    fn one_dimensional_scaling() {
        let d = solve_scaling(&Permutation::identity(1), &q(&[&[1]]), &q(&[&[2]])).unwrap();
        assert_eq!(d, Some(vec![Rationals.from_i64(2)]));
    }

    #[test]
    fn obstructions() {
        let m = q(&[&[1, 0], &[0, 1]]);
        let n = q(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            find_isomorphism(&m, &n).unwrap(),
            IsoOutcome::SupportObstruction { reason: "zero-count mismatch".into() }
        );
        assert!(matches!(find_isomorphism(&q(&[&[1, 1], &[1, 1]]), &m), Err(IsoError::NotPerfect("first"))));
        let a = q(&[&[1, 1], &[0, 1]]);
        let b = q(&[&[1, 2], &[0, 1]]);
        // d1^2 = d1 and d2^2 = d2 force unit scales, then d2^2 = 2 d1 fails
        assert_eq!(find_isomorphism(&a, &b).unwrap(), IsoOutcome::NoBaseFieldScaling);
    }

    #[test]
    fn square_classes_matter_over_q() {
        // d1^2 = 3 d2 and d2^2 = d1 give d2^3 = 3
        let a = q(&[&[0, 1], &[1, 0]]);
        let b = q(&[&[0, 1], &[3, 0]]);
        assert_eq!(find_isomorphism(&a, &b).unwrap(), IsoOutcome::NoBaseFieldScaling);
        let c = q(&[&[0, 1], &[8, 0]]);
        let map = find_isomorphism(&a, &c).unwrap();
        assert!(verify_isomorphism(map.map().unwrap(), &a, &c));
    }

    #[test]
    fn round_trip_over_prime_field() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let p = SupportPattern::parse_rows(&["1101", "0110", "1011", "0001"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (m, _) = sample_instance(&p, &f, &mut rng).unwrap();
            let mut images: Vec<usize> = (0..4).collect();
            rand::seq::SliceRandom::shuffle(images.as_mut_slice(), &mut rng);
            let scales = (0..4).map(|_| f.random_nonzero(&mut rng)).collect();
            let map = MonomialMap::new(&f, Permutation::from_images(images).unwrap(), scales).unwrap();
            let n = m.apply_monomial(&map).unwrap();
            let found = find_isomorphism(&m, &n).unwrap();
            assert!(verify_isomorphism(found.map().unwrap(), &m, &n));
        }
    }

    #[test]
    fn instances_are_deterministic() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let p = SupportPattern::parse_rows(&["110", "011", "101"]).unwrap();
        assert_eq!(random_instance(&p, &f, 3).unwrap(), random_instance(&p, &f, 3).unwrap());
        let zero = SupportPattern::zeros(3).unwrap();
        assert_eq!(random_instance(&zero, &Rationals, 1).unwrap().zero_count(), 9);
    }

    #[test]
    fn template_instances_share_named_values() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let t = PatternTemplate::parse("dim 3\na 1 0\n0 a b\nb 0 *\n").unwrap();
        let a = random_template_instance(&t, &f, 9).unwrap();
        assert_eq!(a, random_template_instance(&t, &f, 9).unwrap());
        assert_eq!(a.entry(0, 0), a.entry(1, 1));
        assert_eq!(a.entry(1, 2), a.entry(2, 0));
        assert_eq!(a.entry(0, 1), &f.one());
        assert!(t.bind(&a).is_some());
    }
}
