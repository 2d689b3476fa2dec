bool lookup (const std::map<std::string, int>& m, const std::string& name, int& out)
{
    if (auto it = m.find(name); it != m.end()) {
        out = it->second;
        return true;
    }
    int fallback = -1;
    out = fallback;
    return false;
}
