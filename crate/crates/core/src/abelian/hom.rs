use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::FPGroup;
use super::lattice::preimage_lattice;
use super::matrix::IntMatrix;
use super::AbelianError;
use crate::exec::Exec;

/// A validated homomorphism of presented groups. Row `i` of `matrix` holds
/// the image of source generator `i` in target generator coordinates.
#[derive(Clone, Debug)]
pub struct FPHom {
    source: Arc<FPGroup>,
    target: Arc<FPGroup>,
    matrix: IntMatrix,
}

/// Kernel, image and cokernel of a homomorphism, each with its structure map.
#[derive(Clone, Debug)]
pub struct KernelImageCokernel {
    pub kernel: Arc<FPGroup>,
    /// Kernel to source.
    pub kernel_inclusion: FPHom,
    pub image: Arc<FPGroup>,
    /// Image to target.
    pub image_inclusion: FPHom,
    pub cokernel: Arc<FPGroup>,
    /// Target to cokernel.
    pub projection: FPHom,
}

impl FPHom {
    pub fn new(
        source: Arc<FPGroup>,
        target: Arc<FPGroup>,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.rows() != source.generator_count() || matrix.cols() != target.generator_count() {
            return Err(AbelianError::HomShape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                source_gens: source.generator_count(),
                target_gens: target.generator_count(),
            });
        }
        // The lattice basis spans the same relations as the presentation.
        let rels = source.relation_basis();
        for i in 0..rels.rows() {
            let image = matrix.apply_row(&rels.row(i));
            if !target
                .normal_form_unchecked(&image)
                .iter()
                .all(|c| c.is_zero())
            {
                return Err(AbelianError::NotWellDefined { relation: i });
            }
        }
        Ok(FPHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: Arc<FPGroup>) -> Self {
        let n = g.generator_count();
        FPHom {
            source: g.clone(),
            target: g,
            matrix: IntMatrix::identity(n),
        }
    }

    /// Multiplication by an integer.
    pub fn scalar(g: Arc<FPGroup>, k: &BigInt) -> Self {
        let n = g.generator_count();
        let diag = vec![k.clone(); n];
        FPHom {
            source: g.clone(),
            target: g,
            matrix: IntMatrix::diagonal(n, n, &diag),
        }
    }

    pub fn source(&self) -> &Arc<FPGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FPGroup> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>, AbelianError> {
        if x.len() != self.source.generator_count() {
            return Err(AbelianError::LengthMismatch {
                expected: self.source.generator_count(),
                found: x.len(),
            });
        }
        Ok(self.matrix.apply_row(x))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FPHom) -> Result<FPHom, AbelianError> {
        if self.target.generator_count() != other.source.generator_count() {
            return Err(AbelianError::LengthMismatch {
                expected: other.source.generator_count(),
                found: self.target.generator_count(),
            });
        }
        Ok(FPHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn kernel_image_cokernel(&self) -> KernelImageCokernel {
        self.kernel_image_cokernel_with(Exec::default())
    }

    pub fn kernel_image_cokernel_with(&self, exec: Exec) -> KernelImageCokernel {
        let n = self.source.generator_count();
        let m = self.target.generator_count();

        // Source vectors whose image lies in the target relation lattice.
        let images: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.target.normal_form_coordinates(&self.matrix.row(i)))
            .collect();
        let lattice = preimage_lattice(&images, &self.target.moduli(), exec);

        let image = Arc::new(
            FPGroup::with_exec(
                self.source.labels().to_vec(),
                IntMatrix::from_rows(n, lattice.clone()),
                exec,
            )
            .expect("widths agree"),
        );
        let image_inclusion = FPHom {
            source: image.clone(),
            target: self.target.clone(),
            matrix: self.matrix.clone(),
        };

        let in_source: Vec<Vec<BigInt>> = lattice
            .iter()
            .map(|l| self.source.normal_form_coordinates(l))
            .collect();
        let kernel_rel = preimage_lattice(&in_source, &self.source.moduli(), exec);
        let k = lattice.len();
        let kernel = Arc::new(
            FPGroup::with_exec(
                (0..k).map(|i| format!("k{i}")).collect(),
                IntMatrix::from_rows(k, kernel_rel),
                exec,
            )
            .expect("widths agree"),
        );
        let kernel_inclusion = FPHom {
            source: kernel.clone(),
            target: self.source.clone(),
            matrix: IntMatrix::from_rows(n, lattice),
        };

        let coker_rel = self.target.relation_basis().vstack(&self.matrix);
        let cokernel = Arc::new(
            FPGroup::with_exec(self.target.labels().to_vec(), coker_rel, exec)
                .expect("widths agree"),
        );
        let projection = FPHom {
            source: self.target.clone(),
            target: cokernel.clone(),
            matrix: IntMatrix::identity(m),
        };

        KernelImageCokernel {
            kernel,
            kernel_inclusion,
            image,
            image_inclusion,
            cokernel,
            projection,
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|i| {
            self.target
                .normal_form_unchecked(&self.matrix.row(i))
                .iter()
                .all(Zero::is_zero)
        })
    }
}
