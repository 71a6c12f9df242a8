"""
From raw HTML to clean sentences
================================

Walks one document through the first three pipeline stages: tag
stripping, Unicode normalization, and sentence splitting with
Ethiopic punctuation.
"""

from corpusforge import Document, extract_text, normalize, split_sentences, split_text

# A small Amharic news fragment as it might arrive from a crawler:
# markup, entities, stray controls, and inconsistent whitespace.
raw = """
<html><head><title>&#4640;&#4653;&#4659;</title>
<style>p { margin: 0 }</style></head>
<body>
  <h1>ዜና</h1>
  <p>ሰላም ነው።   እንዴት ነህ፧</p>
  <!-- byline -->
  <p>አዲስ አበባ ላይ ዝናብ ዘነበ። ቡና&nbsp;ጠጣን።</p>
  <script>track();</script>
</body></html>
"""

text, meta = extract_text(raw)
print("after tag stripping:")
print(repr(text))
print("metadata:", meta)
print()

# normalize() applies NFC, drops control characters, and collapses
# whitespace runs. It is idempotent: cleaning twice changes nothing.
clean = normalize(text)
assert normalize(clean) == clean
print("after normalization:")
print(repr(clean))
print()

# The splitter understands the Ethiopic full stop (።), question mark
# (፧), and paragraph separator (፨). The word separator (፡) never ends
# a sentence.
print("sentences:")
for sentence in split_text(clean, "am"):
    print(" ", sentence)
print()

# English text goes through the same splitter with abbreviation
# handling, so titles and initialisms do not produce false breaks.
english = normalize(
    "Dr. Abebe arrived at 3 p.m. yesterday. The U.S. delegation was "
    "already there! Did anyone notice?"
)
for sentence in split_text(english, "en"):
    print(" ", sentence)
print()

# split_sentences() wraps the same splitter and returns Sentence
# records that remember their document and position, which the miner
# needs later for its alignment window.
doc = Document(
    id="demo-doc", uri="demo.html", source_kind="web", lang_hint="am",
    text=clean, metadata=meta,
)
for s in split_sentences(doc, "am"):
    print(f"  {s.doc_id}[{s.index}] {s.text}")
