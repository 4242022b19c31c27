"""misinfo-sentinel: phishing-claim verification and security/privacy
misinformation measurement for social-media data."""

__version__ = "0.1.0"
