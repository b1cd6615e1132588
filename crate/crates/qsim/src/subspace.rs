use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::BitString;
use crate::error::QsimError;
use crate::state::{check_unitary, SparseState};

/// A unitary acting on the span of a few basis strings (identity elsewhere
/// is not modelled: states must live inside the span).
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceUnitary {
    basis: Vec<BitString>,
    matrix: DMatrix<Complex64>,
}

impl SubspaceUnitary {
    pub fn new(basis: Vec<BitString>, matrix: DMatrix<Complex64>) -> Result<Self, QsimError> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(QsimError::WidthMismatch {
                expected: basis.len(),
                got: matrix.nrows(),
            });
        }
        let mut sorted = basis.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != basis.len() {
            return Err(QsimError::Parse("basis strings must be distinct".into()));
        }
        if let Some(w) = basis.first().map(BitString::len) {
            if let Some(bad) = basis.iter().find(|b| b.len() != w) {
                return Err(QsimError::WidthMismatch {
                    expected: w,
                    got: bad.len(),
                });
            }
        }
        check_unitary(&matrix)?;
        Ok(SubspaceUnitary { basis, matrix })
    }

    pub fn identity(basis: Vec<BitString>) -> Result<Self, QsimError> {
        let n = basis.len();
        Self::new(basis, DMatrix::identity(n, n))
    }

    pub fn basis(&self) -> &[BitString] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> SubspaceUnitary {
        SubspaceUnitary {
            basis: self.basis.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`: apply `other` first. Bases must agree.
    pub fn compose(&self, other: &SubspaceUnitary) -> Result<SubspaceUnitary, QsimError> {
        if self.basis != other.basis {
            return Err(QsimError::SupportOutsideBasis);
        }
        Ok(SubspaceUnitary {
            basis: self.basis.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Matrix element `⟨row|U|col⟩` by basis string.
    pub fn element(&self, row: &BitString, col: &BitString) -> Option<Complex64> {
        let r = self.basis.iter().position(|b| b == row)?;
        let c = self.basis.iter().position(|b| b == col)?;
        Some(self.matrix[(r, c)])
    }
}

impl SparseState {
    pub fn apply_subspace_unitary(&self, u: &SubspaceUnitary) -> Result<SparseState, QsimError> {
        let index: HashMap<&BitString, usize> =
            u.basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut vec = vec![Complex64::default(); u.basis.len()];
        for (s, a) in self.terms() {
            match index.get(s) {
                Some(&i) => vec[i] = a,
                None => return Err(QsimError::SupportOutsideBasis),
            }
        }
        let out = &u.matrix * nalgebra::DVector::from_vec(vec);
        let terms: BTreeMap<BitString, Complex64> = u
            .basis
            .iter()
            .cloned()
            .zip(out.iter().copied())
            .collect();
        SparseState::superpose(self.layout().clone(), terms)?.with_cap(self.cap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::layout::RegisterLayout;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_and_phase() {
        let basis = vec![bits("0110"), bits("1011")];
        let s = SparseState::superpose(
            RegisterLayout::new(&[("A", 1), ("B", 3)]).unwrap(),
            [(basis[0].clone(), c(1.0)), (basis[1].clone(), c(1.0))],
        )
        .unwrap();
        let id = SubspaceUnitary::identity(basis.clone()).unwrap();
        assert!(s.apply_subspace_unitary(&id).unwrap().approx_eq(&s, 1e-12));
        let z = SubspaceUnitary::new(basis.clone(), DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]))).unwrap();
        let zs = s.apply_subspace_unitary(&z).unwrap();
        assert!(zs.amplitude(&basis[1]).re < 0.0);
        let outside = SubspaceUnitary::identity(vec![bits("0110"), bits("0000")]).unwrap();
        assert_eq!(
            s.apply_subspace_unitary(&outside).unwrap_err(),
            QsimError::SupportOutsideBasis
        );
    }

    #[test]
    fn rejects_non_unitary() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(
            SubspaceUnitary::new(vec![bits("0"), bits("1")], m),
            Err(QsimError::NotUnitary(_))
        ));
    }
}
