//! Exact computation of Ext¹ groups of Drinfeld modules and Anderson
//! t-modules over twisted polynomial rings.

pub mod biderivation;
pub mod error;
pub mod ext;
pub mod field;
pub mod homological;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod parse;
pub mod skew;
pub mod tmodule;
pub mod tracked;

pub use biderivation::{assemble_extension, inner_biderivation, reduce_canonical, Biderivation, ExtClass, ReductionPlan};
pub use error::{Error, Result};
pub use ext::{
    duality_transport, ext_carlitz_target, ext_drinfeld_structure, ext_product_structure, ext_tmodule_source,
    ga_sequence, sigma_ext_structure, BasisLabel, BasisOrder, ExtStructure,
};
pub use field::{Field, FieldElement, FiniteField};
pub use skew::{SkewMatrix, SkewPoly, Var};
pub use tmodule::{check_morphism, TModMorphism, TModule, TPoly};
pub use parse::{parse_element, parse_field, parse_matrix, parse_module, parse_poly, parse_tpoly};
pub use homological::{
    act_biderivation, baer_sum, hom_space, is_split, witness_search, pullback, pushout, six_term_maps, t_action, ExtSequence, HomSpace, SixTerm,
    SplitVerdict,
};
