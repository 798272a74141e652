#![no_std]
// elimination loops index several rows at once
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod characters;
pub mod finitegroups;
pub mod fpoly;
pub mod hypcheck;
pub mod imageanalysis;
pub mod newforms;
pub mod numberfields;
pub mod zpoly;
