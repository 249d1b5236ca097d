//! Encoders and decoders for polynomial error-correcting codes.

pub mod analysis;
pub mod bivar;
pub mod error;
pub mod gf;
pub mod lattice;
pub mod linalg;
pub mod mult;
pub mod rm;
pub mod rs;
pub mod subfield;
pub mod unipoly;
pub mod util;

pub use error::{Error, Result};
pub use gf::{Fe, Field};
pub use linalg::{solve_affine, AffineSpace, Matrix};
pub use unipoly::{Multiplicity, UniPoly};
pub use bivar::{rr_roots, BiPoly, LinYPoly};
pub use rs::{DecodeEntry, DecodeOutcome, PolyCode, RsSpec};
pub use mult::{diff_solution_space, prune_list, MultSpec, PruneParams};
pub use lattice::{fast_diff_solve, fast_gs_interpolate, fast_mult_interpolate, short_vector, PolyLatticeBasis};
pub use subfield::{evasive_subcode_decode, frob_twist, subspace_design_build, SubfieldRsSpec, SubspaceDesign};
pub use rm::{rm_local_correct, rm_local_list, rm_local_list_johnson, run_local_algorithm, LocalAdvice, MultiPoly, RmSpec, WordOracle};
pub use analysis::{agreement_hypergraph, bound_calc, brute_force_list, gzp_check, limitation_witness, subspace_poly, wronskian_bound_check, BoundKind, BoundReport, Hypergraph};
