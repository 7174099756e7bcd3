use pyo3::prelude::*;

use sfr_kit_py::sfr_kit_module;

#[test]
fn module_round_trip() {
    pyo3::append_to_inittab!(sfr_kit_module);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            cr#"
import sfr_kit as sk
re = sk.Schema("re", ["founder", "ceo"])
b = sk.score('{"founder": "Jobs, Apple"}', '{"founder": "Jobs, Apple | Wozniak, Apple"}', re)
assert abs(b["total"] - 0.53440) < 1e-5, b
assert sk.streamline('{"founder": "Jobs, Apple", "ceo": ""}', re) == '{"founder": "Jobs, Apple"}'
assert sk.group_advantages([0.2, 0.2]) == [0.0, 0.0]
rewards, adv = sk.score_group('{"founder": "Jobs, Apple"}', ['{"founder": "Jobs, Apple"}', "{}"], re)
assert rewards[0] == 1.0 and adv[0] > adv[1]
try:
    sk.score("garbage", "{}", re)
    raise SystemExit("gold error not raised")
except ValueError as e:
    assert "GoldUnparseable" in str(e)
"#,
            None,
            None,
        )
        .unwrap();
    });
}
