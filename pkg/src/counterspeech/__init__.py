"""counterspeech: score tweets aimed at tracked candidates for
abusiveness, respond supportively above an operator-set threshold, and
validate the classifier stack that calibrates that threshold."""

__version__ = "0.1.0"
