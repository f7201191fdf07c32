#![allow(dead_code)]

pub mod germs;
pub mod oracle;
