pub mod error;
pub mod exactnum;
pub mod genchars;
pub mod hecke;
pub mod jordan;
pub mod lattices;
pub mod localfield;
pub mod residue;
pub mod sympgroups;

pub use error::{Error, Result};
pub use exactnum::{CycNum, FourthRoot, RayClass};
pub use genchars::AffGenChar;
pub use hecke::{DeltaKind, GeneratorPair, QuadRelation};
pub use jordan::{JordanSet, SimpleCuspidalData};
pub use lattices::{LatticeSeq, ValMatrix};
pub use localfield::LSeries;
pub use residue::{Field, Fq, ResidueField, Sign};
pub use sympgroups::{FormDescriptor, MatLS, SimpleStratum};

/// Trial-division primality test for the small moduli used here.
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
