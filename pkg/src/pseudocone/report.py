class Report:
    """Collected law violations; an empty report means the structure checks out."""

    def __init__(self, subject=""):
        self.subject = subject
        self.violations = []

    def add(self, law, **detail):
        self.violations.append({"law": law, **{k: _plain(v) for k, v in detail.items()}})

    def extend(self, other, prefix=""):
        for v in other.violations:
            v = dict(v)
            if prefix:
                v["law"] = f"{prefix}/{v['law']}"
            self.violations.append(v)

    @property
    def ok(self):
        return not self.violations

    def laws(self):
        return sorted({v["law"] for v in self.violations})

    def __bool__(self):
        # truthy when something is wrong, mirroring a non-empty list
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def to_dict(self):
        return {"subject": self.subject, "ok": self.ok, "violations": self.violations}

    def __repr__(self):
        return f"Report({self.subject!r}, {len(self.violations)} violations)"


def _plain(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)
