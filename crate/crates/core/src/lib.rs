pub mod acceptance;
pub mod arith;
pub mod bitset;
pub mod burnside;
pub mod cyclic;
pub mod ghost;
pub mod goursat;
pub mod group;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod names;
pub mod par;
pub mod poset;
pub mod rational;
pub mod report;
pub mod space;
pub mod subgroup;
