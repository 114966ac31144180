import pytest

from cohesig.corpusio import ParseOptions, parse_document


@pytest.fixture
def make_doc():
    def _make(*paragraphs, doc_id="doc", language=""):
        text = "\n\n".join(paragraphs)
        return parse_document(text, ParseOptions(doc_id=doc_id, language=language))
    return _make


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
