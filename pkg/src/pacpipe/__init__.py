"""pacpipe: policy-as-code generation and IaC compliance pipeline."""

__version__ = "0.1.0"
