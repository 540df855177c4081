import io

from contragen.utils.logger import Logger


def make(**kwargs):
    stream = io.StringIO()
    return Logger(output=stream, use_colors=False, **kwargs), stream


def test_source_messages_are_irc_style():
    logger, stream = make()
    logger.source_message("Search", "  Batch 1: 10 objectives ")
    line = stream.getvalue().strip()
    assert line.endswith("<Search> Batch 1: 10 objectives")
    assert line.startswith("[")


def test_markers():
    logger, stream = make()
    logger.success("done")
    logger.warning("careful")
    logger.error("broken")
    lines = stream.getvalue().splitlines()
    assert [line.split("] ", 1)[1] for line in lines] == ["✓ done", "⚠ careful", "✗ broken"]


def test_debug_only_when_verbose():
    quiet, quiet_stream = make(verbose=False)
    quiet.debug("hidden")
    quiet.log_dict({"seed": 1}, "config")
    assert quiet_stream.getvalue() == ""
    loud, loud_stream = make(verbose=True)
    loud.log_dict({"seed": 1}, "config")
    assert loud_stream.getvalue().splitlines()[1].endswith("# seed: 1")


def test_log_file_has_no_color_codes(tmp_path):
    path = tmp_path / "run.log"
    logger = Logger(output=io.StringIO(), use_colors=True, log_to_file=True, log_file=str(path))
    logger.source_message("Harness", "repetition 1/1")
    logger.close()
    text = path.read_text(encoding="utf-8")
    assert "\x1b" not in text
    assert "<Harness> repetition 1/1" in text


def test_from_settings():
    logger = Logger.from_settings({"use_colors": False, "verbose": True}, output=io.StringIO())
    assert not logger.use_colors
    assert logger.verbose
    assert not logger.log_to_file
