"""Bridge between a seq2seq summarizer and the reranking toolkit: finetunes a
model on the marker-augmented training set, decodes candidate pools at several
beam widths, and predicts sentence argument roles. All exchange happens
through JSONL files in the reranker's schemas; a deterministic mock backend
covers every path without a model or accelerator."""

__version__ = "0.1.0"


class GenBridgeError(Exception):
    """Bad input data or unusable model/classifier artifact."""
