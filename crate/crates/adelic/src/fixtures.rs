//! Vendored newform data, embedded so self-tests run without network or files.

pub const ALL: &[(&str, &str)] = &[
    ("11.2.a.a", include_str!("../fixtures/11.2.a.a.json")),
    ("37.2.a.a", include_str!("../fixtures/37.2.a.a.json")),
    ("13.2.e.a", include_str!("../fixtures/13.2.e.a.json")),
    ("7.3.b.a", include_str!("../fixtures/7.3.b.a.json")),
    ("32.2.a.a", include_str!("../fixtures/32.2.a.a.json")),
    ("23.1.b.a", include_str!("../fixtures/23.1.b.a.json")),
    ("11.2.a.a-tw-4", include_str!("../fixtures/11.2.a.a-tw-4.json")),
    ("11.2.a.a-rig7", include_str!("../fixtures/11.2.a.a-rig7.json")),
];

pub fn get(label: &str) -> Option<&'static str> {
    ALL.iter().find(|(l, _)| *l == label).map(|(_, s)| *s)
}
