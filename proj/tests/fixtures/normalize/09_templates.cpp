template <typename T>
T maxAbs (const std::vector<T>& xs)
{
    T best{};
    std::vector<T> scratch(xs.begin(), xs.end());
    for (const T& candidate : scratch) {
        T mag = candidate < T{} ? -candidate : candidate;
        if (mag > best) best = mag;
    }
    return best;
}
