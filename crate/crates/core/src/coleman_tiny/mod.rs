//! Tiny Coleman integrals inside residue disks and the logarithm of classes
//! in the kernel of reduction.
//!
//! All logarithms are renormalized by `1/p`: a [`LogVector`] holds
//! `(1/p) * integral of omega_k` for `omega_k = x^k dx / (2y)`, `k = 0..g`,
//! on the completed-square model.

mod expansion;
mod log;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use expansion::{expand_disk, DiskExpansion};
pub use log::{kernel_log, tiny_integral};

use crate::curve_model::CurveError;
use crate::mumford_jacobian::JacobianError;
use crate::ring_tower::{Fp, LocalRing, PadicResidue, PadicRing, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColemanError {
    #[error("class does not reduce to zero in J(F_p)")]
    NotInKernel,
    #[error("points lie in different residue disks")]
    DistinctDisks,
    #[error("local configuration is ramified in a way that is not supported")]
    RamifiedConfiguration,
    #[error("no function over F_p has the required divisor")]
    NoFunctionFound,
    #[error("points known modulo p^{0} leave no output precision")]
    InsufficientPrecision(u32),
    #[error("renormalized logarithm is not p-integral at the working precision")]
    NonIntegral,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `((1/p) * integral omega_k)_k` modulo `p^M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogVector {
    entries: Vec<PadicResidue>,
}

impl LogVector {
    pub fn new(entries: Vec<PadicResidue>) -> Self {
        assert!(!entries.is_empty(), "a log vector has one entry per differential");
        let prec = entries.iter().map(|e| e.precision()).min().unwrap_or(0);
        LogVector { entries: entries.into_iter().map(|e| e.reduce(prec)).collect() }
    }

    pub fn zero(genus: usize, p: u64, prec: u32) -> Result<Self, ColemanError> {
        let ring = PadicRing::new(p, prec)?;
        Ok(LogVector { entries: vec![ring.zero(); genus] })
    }

    pub fn entries(&self) -> &[PadicResidue] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prime(&self) -> u64 {
        self.entries[0].p()
    }

    pub fn precision(&self) -> u32 {
        self.entries[0].precision()
    }

    /// Least nonnegative representatives.
    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.value()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.value() == 0)
    }

    pub fn reduce(&self, prec: u32) -> LogVector {
        LogVector { entries: self.entries.iter().map(|e| e.reduce(prec)).collect() }
    }

    pub fn to_fp(&self) -> Vec<Fp> {
        self.entries.iter().map(|e| Fp::new(e.value(), e.p())).collect()
    }

    pub fn add(&self, other: &LogVector) -> LogVector {
        LogVector::new(self.entries.iter().zip(&other.entries).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, other: &LogVector) -> LogVector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LogVector {
        LogVector { entries: self.entries.iter().map(|e| -*e).collect() }
    }

    pub fn scale(&self, n: i64) -> LogVector {
        LogVector { entries: self.entries.iter().map(|e| *e * e.ring().from_i64(n)).collect() }
    }
}

impl fmt::Display for LogVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.value().to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for LogVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LogVector", 3)?;
        st.serialize_field("p", &self.prime())?;
        st.serialize_field("precision", &self.precision())?;
        st.serialize_field("values", &self.values())?;
        st.end()
    }
}
