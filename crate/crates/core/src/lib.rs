pub mod agcode;
pub mod attack;
pub mod code;
pub mod curve;
pub mod ecp;
pub mod field;
pub mod io;
pub mod matrix;
pub mod mceliece;
pub mod params;
