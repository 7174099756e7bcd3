"""Builds the extension module and exercises it from Python.

Usage: python3 crates/py/python/smoke_test.py [--no-build]
"""

import json
import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[3]

RE_LABELS = ["conjunction", "feature of", "hyponym of", "used for", "part of", "compare", "evaluate for"]
RE_FULL = json.dumps({label: ("surface, algorithm" if label == "used for" else "") for label in RE_LABELS})
EE_FULL = json.dumps({
    "potential therapeutic event": "",
    "adverse event": "developed: Subject: patient; Treatment.Drug: IL-2; Treatment.Time_elapsed: After 5 days",
})


def load():
    if "--no-build" not in sys.argv:
        subprocess.run(
            ["cargo", "build", "-p", "sfr-kit-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
    lib = ROOT / "target" / "debug" / "libsfr_kit_py.so"
    dest = Path(tempfile.mkdtemp())
    shutil.copy(lib, dest / "sfr_kit.so")
    sys.path.insert(0, str(dest))
    import sfr_kit

    return sfr_kit


def main():
    sk = load()

    re = sk.Schema("re", RE_LABELS)
    assert re.task == "re" and re.labels == RE_LABELS
    assert sk.streamline(RE_FULL, re) == '{"used for": "surface, algorithm"}'
    assert sk.serialize(RE_FULL, re, concise=True) == sk.streamline(RE_FULL, re)

    report = sk.parse("Sure: " + RE_FULL, re)
    assert report["status"] == "RECOVERED", report
    assert sk.parse("nothing here", re)["status"] == "FAILED"

    gold = '{"founder": "Jobs, Apple"}'
    pred = '{"founder": "Jobs, Apple | Wozniak, Apple"}'
    founders = sk.Schema("re", ["founder"])
    b = sk.score(gold, pred, founders)
    assert abs(b["total"] - 0.53440) < 1e-5, b
    assert {t["name"] for t in b["terms"]} >= {"f1_triples", "jac_triples"}

    ner = sk.Schema("ner", ["PER", "LOC"])
    gold = '{"PER": "Kevin | Therese", "LOC": "Paris"}'
    pred = '{"PER": "Kevin | Bob"}'
    assert abs(sk.score(gold, pred, ner)["total"] + 0.19761) < 1e-5
    clip = sk.Config({"clip_to_unit": True})
    assert clip.clip_to_unit and sk.score(gold, pred, ner, clip)["total"] == 0.0
    try:
        sk.Config({"ner": {"w_z": 1}})
    except ValueError:
        pass
    else:
        raise AssertionError("unknown config key accepted")

    adv = sk.group_advantages([1.0, 0.5, 0.0, 0.5])
    assert all(abs(a - e) < 1e-5 for a, e in zip(adv, [math.sqrt(2), 0, -math.sqrt(2), 0]))
    assert sk.group_advantages([0.3, 0.3]) == [0.0, 0.0]
    rewards, adv = sk.score_group(gold, [gold, "{}", "junk", pred], ner)
    assert abs(rewards[0] - 1.0) < 1e-12 and adv[0] == max(adv)
    assert rewards[1] == rewards[2]

    ee = sk.Schema("ee", ["potential therapeutic event", "adverse event"],
                   ["Subject", "Treatment.Drug", "Treatment.Time_elapsed"])
    pred = EE_FULL.replace("; Treatment.Drug: IL-2", "")
    args = sk.evaluate([{"id": "1", "gold": EE_FULL, "pred": pred}], ee, "argument")
    assert (args["tp"], args["fn"]) == (2, 1), args
    assert sk.score(EE_FULL, EE_FULL, ee)["alignment"]["f_full"] == 1.0
    units = sk.extract_units(EE_FULL, ee)
    assert units["task"] == "ee" and units["events"] == ["adverse event"]

    acc = sk.exact_acc([{"id": "w", "gold": '{"PER": "Kevin"}', "pred": '{"PER": " Kevin "}'}], ["PER"])
    assert acc == {"PER": 1.0}
    buckets = sk.length_buckets(["a b", "a b c", "a"])
    assert [x["percentile"] for x in buckets["buckets"]] == [50, 70, 99]
    assert sk.allocate([3, 3, 4], 24979) == [7494, 7494, 9991]
    assert "Please use concise output" in sk.render_prompt(re, "text", "sa")
    assert sk.check_grounding("Jobs founded it", '{"founder": "Jobs, Apple"}', founders) == ["Apple"]
    assert [p["task"] for p in sk.default_phase_plan()["phases"]] == ["ner", "re", "ee"]

    print("python smoke test ok")


if __name__ == "__main__":
    main()
