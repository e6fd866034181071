#![allow(dead_code)]

pub mod checks;
pub mod dot;
pub mod gen;
pub mod oracle;
pub mod transcript;
pub mod turns;
