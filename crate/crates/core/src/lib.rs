//! Finite 2-colored posets, the homomorphism preorder between them, and the
//! correspondence with Wadge reductions between the sets they represent in
//! the Scott domain, checked on finite subset lattices.

pub mod classes;
pub mod error;
pub mod experiment;
pub mod families;
pub mod finset;
pub mod game;
pub mod hom;
pub mod io;
pub mod poset;
pub mod scott;

pub use classes::{
    is_embeddable, is_finite_branching, is_shrub, one_neighbors, pattern_embeds, str_decr,
    str_incr, ClassReport, Pattern, PatternMatch, Strengths,
};
pub use error::{Error, Result};
pub use families::{fixture, gen_p, gen_q};
pub use finset::FinSet;
pub use hom::{
    compare, find_hom, matrix, verify_hom, Homomorphism, Mode, SearchOptions, SearchOutcome,
    Verdict,
};
pub use poset::ColoredPoset;
pub use scott::{
    alternation_rank, build_a, build_reduction, extract_hom, is_approximable, label, sup_label,
    verify_reduction, Labeling, MonotoneMap, SetFamily, Value,
};
