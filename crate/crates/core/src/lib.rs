pub mod linalg;
pub mod poset;
pub mod coloured;
pub mod bundle;
pub mod specseq;
pub mod khovanov;
