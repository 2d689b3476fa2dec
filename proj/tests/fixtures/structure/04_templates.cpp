template <typename T, int N>
class Stack {
    T m_data[N];
    int m_top = 0;
public:
    void push(const T& v) { m_data[m_top++] = v; }
    template <typename F>
    void each(F&& f) const;
};

template <typename T>
T clamp_value(T v, T lo, T hi)
{
    return v < lo ? lo : (v > hi ? hi : v);
}

template <>
struct Stack<bool, 1> { bool flag; };
