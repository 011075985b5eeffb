//! Pauli and Gell-Mann generator tables (1-based, like their subscripts).

use std::sync::LazyLock;

use crate::error::{BuresError, Result};
use crate::linalg::{ComplexSquareMatrix, SpectralGenerator, C64};

const O: C64 = C64::new(0.0, 0.0);
const R: C64 = C64::new(1.0, 0.0);
const M: C64 = C64::new(-1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);
const J: C64 = C64::new(0.0, -1.0);

const PAULI_TABLE: [[[C64; 2]; 2]; 3] = [[[O, R], [R, O]], [[O, J], [I, O]], [[R, O], [O, M]]];

const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_764_509_148_780_502;

const S: C64 = C64::new(FRAC_1_SQRT_3, 0.0);
const S2: C64 = C64::new(-2.0 * FRAC_1_SQRT_3, 0.0);

const GELL_MANN_TABLE: [[[C64; 3]; 3]; 8] = [
    [[O, R, O], [R, O, O], [O, O, O]],
    [[O, J, O], [I, O, O], [O, O, O]],
    [[R, O, O], [O, M, O], [O, O, O]],
    [[O, O, R], [O, O, O], [R, O, O]],
    [[O, O, J], [O, O, O], [I, O, O]],
    [[O, O, O], [O, O, R], [O, R, O]],
    [[O, O, O], [O, O, J], [O, I, O]],
    [[S, O, O], [O, S, O], [O, O, S2]],
];

/// Pauli matrix σ_k, `k ∈ {1, 2, 3}`.
pub fn pauli(k: usize) -> Result<ComplexSquareMatrix> {
    if !(1..=3).contains(&k) {
        return Err(BuresError::InvalidIndex { index: k, max: 3 });
    }
    ComplexSquareMatrix::from_rows(&PAULI_TABLE[k - 1])
}

/// Gell-Mann matrix λ_k, `k ∈ {1, ..., 8}`.
pub fn gell_mann(k: usize) -> Result<ComplexSquareMatrix> {
    if !(1..=8).contains(&k) {
        return Err(BuresError::InvalidIndex { index: k, max: 8 });
    }
    ComplexSquareMatrix::from_rows(&GELL_MANN_TABLE[k - 1])
}

/// A generator basis together with its Cartan/coset split.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    n: usize,
    generators: Vec<ComplexSquareMatrix>,
    cartan_indices: Vec<usize>,
    coset_indices: Vec<usize>,
}

impl GeneratorSet {
    /// σ₁..σ₃ for `n = 2`, λ₁..λ₈ for `n = 3`.
    pub fn for_dim(n: usize) -> Result<Self> {
        let (generators, cartan_indices) = match n {
            2 => ((1..=3).map(pauli).collect::<Result<Vec<_>>>()?, vec![3]),
            3 => (
                (1..=8).map(gell_mann).collect::<Result<Vec<_>>>()?,
                vec![3, 8],
            ),
            _ => return Err(BuresError::UnsupportedDimension(n)),
        };
        let coset_indices = (1..=generators.len())
            .filter(|k| !cartan_indices.contains(k))
            .collect();
        Ok(Self {
            n,
            generators,
            cartan_indices,
            coset_indices,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// 1-based lookup.
    pub fn get(&self, k: usize) -> Result<&ComplexSquareMatrix> {
        k.checked_sub(1)
            .and_then(|i| self.generators.get(i))
            .ok_or(BuresError::InvalidIndex {
                index: k,
                max: self.generators.len(),
            })
    }

    /// 1-based mutable lookup, for fault-injection fixtures.
    pub fn get_mut(&mut self, k: usize) -> Result<&mut ComplexSquareMatrix> {
        let max = self.generators.len();
        k.checked_sub(1)
            .and_then(|i| self.generators.get_mut(i))
            .ok_or(BuresError::InvalidIndex { index: k, max })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ComplexSquareMatrix)> {
        self.generators.iter().enumerate().map(|(i, g)| (i + 1, g))
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan_indices
    }

    pub fn coset_indices(&self) -> &[usize] {
        &self.coset_indices
    }

    /// Largest `|Tr(T_a T_b) − 2δ_ab|` over all pairs.
    pub fn orthogonality_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, ta) in self.iter() {
            for (b, tb) in self.iter() {
                let expected = if a == b { 2.0 } else { 0.0 };
                let tr = (ta * tb).trace();
                worst = worst.max((tr - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| g.hermiticity_deviation())
            .fold(0.0, f64::max)
    }

    pub fn trace_deviation(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| g.trace().norm())
            .fold(0.0, f64::max)
    }

    /// Largest `‖[T_a, T_b]‖_F` over Cartan pairs.
    pub fn cartan_commutator_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &a in &self.cartan_indices {
            for &b in &self.cartan_indices {
                let ta = self.generators[a - 1];
                let tb = self.generators[b - 1];
                worst = worst.max((ta * tb - tb * ta).frobenius_norm());
            }
        }
        worst
    }

    /// Largest off-diagonal magnitude among the Cartan generators.
    pub fn cartan_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &a in &self.cartan_indices {
            let g = &self.generators[a - 1];
            for i in 0..self.n {
                for j in 0..self.n {
                    if i != j {
                        worst = worst.max(g[(i, j)].norm());
                    }
                }
            }
        }
        worst
    }
}

/// Generators with cached spectral decompositions, used by the Euler
/// factorizations. Index 0 holds σ_k / λ_k for k = 1.
pub(crate) static PAULI_SPECTRAL: LazyLock<Vec<SpectralGenerator>> = LazyLock::new(|| {
    (1..=3)
        .map(|k| SpectralGenerator::new(pauli(k).expect("pauli")).expect("hermitian"))
        .collect()
});

pub(crate) static GELL_MANN_SPECTRAL: LazyLock<Vec<SpectralGenerator>> = LazyLock::new(|| {
    (1..=8)
        .map(|k| SpectralGenerator::new(gell_mann(k).expect("gell-mann")).expect("hermitian"))
        .collect()
});

pub(crate) fn spectral(n: usize, k: usize) -> &'static SpectralGenerator {
    match n {
        2 => &PAULI_SPECTRAL[k - 1],
        _ => &GELL_MANN_SPECTRAL[k - 1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_entries() {
        assert_eq!(
            pauli(3).unwrap(),
            ComplexSquareMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap()
        );
        let s1 = pauli(1).unwrap();
        assert_eq!(s1 * s1, ComplexSquareMatrix::identity(2).unwrap());
        for k in 1..=3 {
            let p = pauli(k).unwrap();
            assert_eq!((p * p).trace(), c(2.0, 0.0));
        }
    }

    #[test]
    fn gell_mann_entries() {
        let l8 = gell_mann(8).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let expected = ComplexSquareMatrix::from_real_diagonal(&[s, s, -2.0 * s]).unwrap();
        assert!(l8.distance(&expected) <= 2.0 * f64::EPSILON);
        assert!(l8.trace().norm() < 1e-15);

        let l5 = gell_mann(5).unwrap();
        let expected = ComplexSquareMatrix::from_rows(&[
            [c(0., 0.), c(0., 0.), c(0., -1.)],
            [c(0., 0.), c(0., 0.), c(0., 0.)],
            [c(0., 1.), c(0., 0.), c(0., 0.)],
        ])
        .unwrap();
        assert_eq!(l5, expected);
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            pauli(0),
            Err(BuresError::InvalidIndex { index: 0, max: 3 })
        ));
        assert!(pauli(4).is_err());
        assert!(gell_mann(0).is_err());
        assert!(gell_mann(9).is_err());
        let set = GeneratorSet::for_dim(3).unwrap();
        assert!(set.get(0).is_err());
        assert!(set.get(9).is_err());
        assert!(GeneratorSet::for_dim(4).is_err());
    }

    #[test]
    fn orthogonality_all_pairs() {
        // Direct evaluation of all 64 (and 9) traces.
        for n in [2, 3] {
            let set = GeneratorSet::for_dim(n).unwrap();
            for (a, ta) in set.iter() {
                for (b, tb) in set.iter() {
                    let tr = (ta * tb).trace();
                    let expected = if a == b { 2.0 } else { 0.0 };
                    assert!((tr.re - expected).abs() <= 1e-14, "n={n} a={a} b={b}");
                    assert!(tr.im.abs() <= 1e-14);
                }
            }
            assert!(set.orthogonality_deviation() <= 1e-14);
        }
    }

    #[test]
    fn hermitian_traceless_and_cartan_structure() {
        for n in [2, 3] {
            let set = GeneratorSet::for_dim(n).unwrap();
            assert_eq!(set.hermiticity_deviation(), 0.0);
            assert!(set.trace_deviation() <= 1e-15);
            assert!(set.cartan_commutator_norm() <= 1e-14);
            assert_eq!(set.cartan_off_diagonal(), 0.0);
        }
        let su3 = GeneratorSet::for_dim(3).unwrap();
        assert_eq!(su3.cartan_indices(), &[3, 8]);
        assert_eq!(su3.coset_indices(), &[1, 2, 4, 5, 6, 7]);
        let su2 = GeneratorSet::for_dim(2).unwrap();
        assert_eq!(su2.coset_indices(), &[1, 2]);
    }

    #[test]
    fn coset_generators_do_not_commute_with_generic_diagonal() {
        let rho = ComplexSquareMatrix::from_real_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let su3 = GeneratorSet::for_dim(3).unwrap();
        for (k, g) in su3.iter() {
            let comm = (*g * rho - rho * *g).frobenius_norm();
            if su3.cartan_indices().contains(&k) {
                assert!(comm < 1e-15);
            } else {
                assert!(comm > 1e-3, "λ{k} should not commute");
            }
        }
    }
}
