"""Pass/fail reports shared by the checkers and the oracle."""

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    instances: int = 0
    violations: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self):
        return not self.violations

    def fail(self, detail):
        self.violations.append(detail)

    def to_json(self):
        out = {"name": self.name, "instances": self.instances,
               "violations": list(self.violations)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, name, note=""):
        c = Check(name, note=note)
        self.checks.append(c)
        return c

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.instances, list(c.violations), c.note))
        return self

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def get(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self):
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}

    def to_text(self):
        lines = []
        for c in self.checks:
            status = "ok  " if c.passed else "FAIL"
            line = f"{status} {c.name} ({c.instances} instances"
            if c.violations:
                line += f", {len(c.violations)} violations; first: {c.violations[0]}"
            line += ")"
            if c.note:
                line += f" [{c.note}]"
            lines.append(line)
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)
