#![no_main]

use ext_core::algebra::{AlgebraPresentation, GroupTable};
use ext_core::input::parse_field;
use ext_core::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let field = parse_field(text).unwrap_or(Field::Prime(2));
    let _ = GroupTable::named(text);
    let _ = AlgebraPresentation::named(text, field);
});
