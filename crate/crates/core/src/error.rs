use thiserror::Error;

use crate::exact::{Int, Rat};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix or vector is not integral")]
    NotIntegral,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("odd diagonal entry {0} in Gram matrix")]
    OddDiagonal(Int),
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("matrix does not preserve the Gram form")]
    NotIsometry,
    #[error("matrix is not an integral isometry of the lattice")]
    NotIntegralIsometry,
    #[error("reflection mirror is isotropic")]
    IsotropicMirror,
    #[error("transvection base vector is not isotropic")]
    NotIsotropic,
    #[error("vectors are not orthogonal")]
    NotOrthogonal,
    #[error("discriminant group of order {size} exceeds cap {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("vector has coordinates outside the supported block")]
    UnsupportedCoordinates,
    #[error("vectors are not Eichler equivalent")]
    EquivalenceFails,
    #[error("internal linear solve failed")]
    InternalSolveFailure,
    #[error("lattice has no usable hyperbolic splitting")]
    MissingSplitting,
    #[error("vector is not a (-2)-root")]
    NotRoot,
    #[error("matrix is not in SL2(Z)")]
    NotUnimodular,
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error("1 - s*w^2/2 vanishes")]
    SingularScale,
    #[error("vector has norm {0}, expected 6")]
    WrongNorm(Rat),
    #[error("no norm-6 vector available in the complement")]
    NoNormSixVector,
}

impl Error {
    /// Stable machine-readable code, used by the CLI's error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "Dimension",
            Error::NotIntegral => "NotIntegral",
            Error::NotSymmetric => "NotSymmetric",
            Error::DegenerateForm => "DegenerateForm",
            Error::OddDiagonal(_) => "OddDiagonal",
            Error::ZeroVector => "ZeroVector",
            Error::NotPrimitive => "NotPrimitive",
            Error::NotIsometry => "NotIsometry",
            Error::NotIntegralIsometry => "NotIntegralIsometry",
            Error::IsotropicMirror => "IsotropicMirror",
            Error::NotIsotropic => "NotIsotropic",
            Error::NotOrthogonal => "NotOrthogonal",
            Error::TooLarge { .. } => "TooLarge",
            Error::UnsupportedCoordinates => "UnsupportedCoordinates",
            Error::EquivalenceFails => "EquivalenceFails",
            Error::InternalSolveFailure => "InternalSolveFailure",
            Error::MissingSplitting => "MissingSplitting",
            Error::NotRoot => "NotRoot",
            Error::NotUnimodular => "NotUnimodular",
            Error::ZeroScale => "ZeroScale",
            Error::SingularScale => "SingularScale",
            Error::WrongNorm(_) => "WrongNorm",
            Error::NoNormSixVector => "NoNormSixVector",
        }
    }
}
