import json

from docutils import nodes

from mcspeedup.configuring import PRESET_DESCRIPTIONS, PRESETS


def preset_role(name, rawtext, text, lineno, inliner, options={}, content=[]):
    if text not in PRESETS:
        msg = inliner.reporter.error(f"Unknown preset '{text}'", line=lineno)
        return [inliner.problematic(rawtext, rawtext, msg)], [msg]
    node_list = [
        nodes.literal("", text),
        nodes.Text(f", {PRESET_DESCRIPTIONS[text]} "),
        nodes.literal("", json.dumps(PRESETS[text], sort_keys=True)),
    ]
    return node_list, []


def setup(app):
    app.add_role("preset", preset_role)
    return {"parallel_read_safe": True, "parallel_write_safe": True}
